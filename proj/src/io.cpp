#include "conric/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace conric::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
    throw Error(ErrorCode::input_error, message);
}

std::vector<double> read_grid(const json& doc, const char* key, std::size_t n) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        fail(std::string("missing field \"") + key + "\"");
    }
    if (!it->is_array() || it->size() != n) {
        fail(std::string("\"") + key + "\" must be an array of " + std::to_string(n) + " rows");
    }
    std::vector<double> out;
    out.reserve(n * n);
    for (const json& row : *it) {
        if (!row.is_array() || row.size() != n) {
            fail(std::string("every row of \"") + key + "\" must hold " + std::to_string(n) +
                 " numbers");
        }
        for (const json& v : row) {
            if (!v.is_number()) {
                fail(std::string("\"") + key + "\" contains a non-numeric entry");
            }
            const double d = v.get<double>();
            if (!std::isfinite(d)) {
                fail(std::string("\"") + key + "\" contains a non-finite entry");
            }
            out.push_back(d);
        }
    }
    return out;
}

CMatrix assemble(std::size_t n, const std::vector<double>& re, const std::vector<double>* im) {
    std::vector<Complex> entries(n * n);
    for (std::size_t i = 0; i < n * n; ++i) {
        entries[i] = Complex(re[i], im ? (*im)[i] : 0.0);
    }
    return CMatrix(n, n, std::move(entries));
}

double parse_double(std::string_view token, std::size_t line) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    if (first != last && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        fail("line " + std::to_string(line) + ": bad number \"" + std::string(token) + "\"");
    }
    return value;
}

}  // namespace

MatrixFile parse_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        fail("top level must be an object");
    }
    const auto n_it = doc.find("n");
    if (n_it == doc.end() || !n_it->is_number_integer() || n_it->get<long long>() < 1) {
        fail("\"n\" must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(n_it->get<long long>());
    MatrixFile out;
    const auto re = read_grid(doc, "re", n);
    if (doc.contains("im")) {
        const auto im = read_grid(doc, "im", n);
        out.a = assemble(n, re, &im);
    } else {
        out.a = assemble(n, re, nullptr);
    }
    const bool has_qre = doc.contains("q_re");
    const bool has_qim = doc.contains("q_im");
    if (has_qim && !has_qre) {
        fail("\"q_im\" given without \"q_re\"");
    }
    if (has_qre) {
        const auto qre = read_grid(doc, "q_re", n);
        if (has_qim) {
            const auto qim = read_grid(doc, "q_im", n);
            out.q = assemble(n, qre, &qim);
        } else {
            out.q = assemble(n, qre, nullptr);
        }
        if (!is_hermitian(*out.q)) {
            fail("Q is not Hermitian");
        }
    }
    return out;
}

MatrixFile parse_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0;
    std::vector<Complex> entries;
    std::size_t rows_read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream tokens(line);
        std::string token;
        if (n == 0) {
            tokens >> token;
            std::size_t value = 0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
                fail("line " + std::to_string(line_no) + ": expected a positive dimension");
            }
            if (tokens >> token) {
                fail("line " + std::to_string(line_no) + ": trailing text after the dimension");
            }
            n = value;
            entries.reserve(n * n);
            continue;
        }
        if (rows_read == n) {
            fail("line " + std::to_string(line_no) + ": more than " + std::to_string(n) + " rows");
        }
        std::size_t count = 0;
        while (tokens >> token) {
            const auto comma = token.find(',');
            double re = 0.0;
            double im = 0.0;
            if (comma == std::string::npos) {
                re = parse_double(token, line_no);
            } else {
                re = parse_double(std::string_view(token).substr(0, comma), line_no);
                im = parse_double(std::string_view(token).substr(comma + 1), line_no);
            }
            entries.emplace_back(re, im);
            ++count;
        }
        if (count != n) {
            fail("line " + std::to_string(line_no) + ": expected " + std::to_string(n) +
                 " entries, found " + std::to_string(count));
        }
        ++rows_read;
    }
    if (n == 0) {
        fail("empty input");
    }
    if (rows_read != n) {
        fail("expected " + std::to_string(n) + " rows, found " + std::to_string(rows_read));
    }
    return MatrixFile{CMatrix(n, n, std::move(entries)), std::nullopt};
}

MatrixFile parse_auto(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        return parse_json(text);
    }
    return parse_text(text);
}

MatrixFile read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_auto(buf.str());
}

std::string to_text(const CMatrix& a) {
    std::string out = std::to_string(a.rows()) + "\n";
    char buf[64];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", a(i, j).real(), a(i, j).imag());
            out += buf;
            out += j + 1 == a.cols() ? '\n' : ' ';
        }
    }
    return out;
}

}  // namespace conric::io
