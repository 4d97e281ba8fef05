#pragma once
// Stable file formats.  Matrices travel as JSON with decimal-string
// entries so arbitrary precision survives serialization:
//   {"rows": r, "cols": s, "data": ["1", "0", "-1", ...]}   (row-major)
// Squares travel as text: first line N, then N lines of N integers.
// Parse errors name the offending field.

#include <sstream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

#include "mms/int_matrix.hpp"
#include "mms/magic_system.hpp"

namespace mms {

inline nlohmann::json matrix_to_json(const IntMatrix& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    nlohmann::json data = nlohmann::json::array();
    for (const mpz_class& v : m.entries()) data.push_back(v.get_str());
    j["data"] = std::move(data);
    return j;
}

inline mpz_class parse_decimal(const std::string& text, const std::string& field) {
    mpz_class v;
    if (text.empty() || mpz_set_str(v.get_mpz_t(), text.c_str(), 10) != 0)
        throw std::invalid_argument("field \"" + field + "\": \"" + text +
                                    "\" is not a decimal integer");
    return v;
}

inline IntMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("matrix JSON: document is not an object");
    if (!j.contains("rows") || !j["rows"].is_number_integer())
        throw std::invalid_argument("matrix JSON: field \"rows\" missing or not an integer");
    if (!j.contains("cols") || !j["cols"].is_number_integer())
        throw std::invalid_argument("matrix JSON: field \"cols\" missing or not an integer");
    if (!j.contains("data") || !j["data"].is_array())
        throw std::invalid_argument("matrix JSON: field \"data\" missing or not an array");
    int rows = j["rows"].get<int>();
    int cols = j["cols"].get<int>();
    if (rows < 1) throw std::invalid_argument("matrix JSON: field \"rows\" must be positive");
    if (cols < 0) throw std::invalid_argument("matrix JSON: field \"cols\" must be nonnegative");
    const nlohmann::json& data = j["data"];
    if (static_cast<long>(data.size()) != static_cast<long>(rows) * cols)
        throw std::invalid_argument("matrix JSON: field \"data\" has " +
                                    std::to_string(data.size()) + " entries, expected " +
                                    std::to_string(static_cast<long>(rows) * cols));
    IntMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int col = 0; col < cols; ++col) {
            const nlohmann::json& cell = data[static_cast<std::size_t>(i) * cols + col];
            if (!cell.is_string())
                throw std::invalid_argument(
                    "matrix JSON: field \"data\" entries must be decimal strings");
            m.at(i, col) = parse_decimal(cell.get<std::string>(), "data");
        }
    return m;
}

inline std::string square_to_text(const Square& z) {
    std::ostringstream out;
    out << z.order << "\n";
    for (int i = 1; i <= z.order; ++i) {
        for (int j = 1; j <= z.order; ++j) {
            if (j > 1) out << " ";
            out << z.at(i, j).get_str();
        }
        out << "\n";
    }
    return out.str();
}

inline Square square_from_text(std::istream& in) {
    int n = 0;
    if (!(in >> n) || n < 1)
        throw std::invalid_argument("square text: first token must be a positive order");
    Square z(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            std::string token;
            if (!(in >> token))
                throw std::invalid_argument("square text: expected " + std::to_string(n * n) +
                                            " entries after the order line");
            z.at(i, j) = parse_decimal(token, "entry (" + std::to_string(i) + "," +
                                                  std::to_string(j) + ")");
        }
    return z;
}

inline Square square_from_text(const std::string& text) {
    std::istringstream in(text);
    return square_from_text(in);
}

}  // namespace mms
