#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "gram.hpp"
#include "matrix.hpp"

namespace holevo {

namespace detail {

inline bool parse_signed_double(const char*& p, const char* end, double& out) {
    if (p == end) return false;
    bool negative = false;
    const char* q = p;
    if (*q == '+' || *q == '-') {
        negative = (*q == '-');
        ++q;
    }
    double magnitude = 0.0;
    const std::from_chars_result res = std::from_chars(q, end, magnitude);
    if (res.ec != std::errc() || res.ptr == q) return false;
    out = negative ? -magnitude : magnitude;
    p = res.ptr;
    return true;
}

// Accepts `a`, `bi`, `a+bi`, `a-bi`, with `i`, `+i`, `-i` allowed for a
// unit imaginary part; exponents as in the usual double syntax.
inline bool parse_complex_token(const std::string& token, cplx& out) {
    const char* p = token.data();
    const char* const end = p + token.size();
    if (p == end) return false;

    // unit-imaginary shorthand
    if (token == "i" || token == "+i") {
        out = cplx(0.0, 1.0);
        return true;
    }
    if (token == "-i") {
        out = cplx(0.0, -1.0);
        return true;
    }

    double first = 0.0;
    if (!parse_signed_double(p, end, first)) return false;
    if (p == end) {
        out = cplx(first, 0.0);
        return true;
    }
    if (*p == 'i') {
        out = cplx(0.0, first);
        return ++p == end;
    }

    if (std::string(p, end) == "+i") {
        out = cplx(first, 1.0);
        return true;
    }
    if (std::string(p, end) == "-i") {
        out = cplx(first, -1.0);
        return true;
    }

    double second = 0.0;
    if (!parse_signed_double(p, end, second)) return false;
    if (p == end || *p != 'i') return false;
    out = cplx(first, second);
    return ++p == end;
}

} // namespace detail

// Reads the plain-text Gram format: first a line containing the matrix
// size M, then M rows of M whitespace-separated complex entries written
// as `a+bi`; everything from `#` to end of line is a comment. Entries
// may wrap across lines. The parsed matrix is checked against the Gram
// structure rules (unit diagonal, Hermitian); positive semidefiniteness
// is the solver's concern.
inline GramMatrix parse_gram(std::istream& in) {
    std::string text;
    for (std::string line; std::getline(in, line);) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        text += line;
        text += '\n';
    }

    std::istringstream tokens(text);
    long size_raw = 0;
    if (!(tokens >> size_raw) || size_raw < 1)
        throw ValidationError("gram file: first entry must be a positive matrix size");
    const std::size_t M = static_cast<std::size_t>(size_raw);
    if (M > 4096) throw ValidationError("gram file: matrix size is implausibly large");

    CMatrix g(M);
    std::string token;
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            if (!(tokens >> token))
                throw ValidationError("gram file: ran out of entries at row " +
                                      std::to_string(i + 1) + ", column " + std::to_string(j + 1) +
                                      " (expected " + std::to_string(M * M) + " entries)");
            cplx value;
            if (!detail::parse_complex_token(token, value))
                throw ValidationError("gram file: cannot parse entry '" + token + "' at row " +
                                      std::to_string(i + 1) + ", column " + std::to_string(j + 1));
            g(i, j) = value;
        }
    }
    if (tokens >> token)
        throw ValidationError("gram file: trailing entry '" + token + "' after " +
                              std::to_string(M * M) + " matrix entries");

    validate_gram_structure(g);
    return GramMatrix{std::move(g)};
}

// Writes a matrix in the format parse_gram reads, with enough digits to
// round-trip doubles exactly.
inline void write_gram(std::ostream& out, const GramMatrix& g) {
    const std::size_t M = g.size();
    out << M << '\n';
    char buf[96];
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < M; ++j) {
            const cplx v = g.entries(i, j);
            std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
            out << (j ? " " : "") << buf;
        }
        out << '\n';
    }
}

} // namespace holevo
