#pragma once

// JSON forms: OperatorMatrix as row-major arrays of [re, im] pairs, sequences
// as plain arrays.

#include <string>
#include <vector>

#include "json.hpp"

#include "qha/error.hpp"
#include "qha/fock_core.hpp"

namespace qha {

using Json = nlohmann::json;

inline Json to_json(const TruncationSpec& t) {
    return Json{{"dim", t.dim}, {"inner_dim", t.inner_dim}, {"radius", t.radius}};
}

inline Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(j, k).real(), m(j, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const OperatorMatrix& s) { return Json{{"trunc", to_json(s.trunc)}, {"entries", to_json(s.entries)}}; }

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const std::vector<double>& v) { return Json(v); }

inline TruncationSpec truncation_from_json(const Json& j) {
    TruncationSpec t;
    t.dim = j.at("dim").get<int>();
    t.inner_dim = j.at("inner_dim").get<int>();
    t.radius = j.at("radius").get<double>();
    return t;
}

inline ComplexMatrix matrix_from_json(const Json& rows) {
    if (!rows.is_array()) throw InvalidArgument("matrix JSON must be an array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    ComplexMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Json& row = rows[j];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw InvalidArgument("matrix JSON must be square");
        for (Eigen::Index k = 0; k < n; ++k) {
            const Json& e = row[k];
            if (!e.is_array() || e.size() != 2) throw InvalidArgument("matrix entries must be [re, im] pairs");
            m(j, k) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

/// Accepts either {"trunc": ..., "entries": ...} or a bare entries array, in
/// which case `fallback` supplies the truncation with dim replaced by the size.
inline OperatorMatrix operator_from_json(const Json& j, TruncationSpec fallback) {
    if (j.is_object()) return {matrix_from_json(j.at("entries")), truncation_from_json(j.at("trunc"))};
    ComplexMatrix m = matrix_from_json(j);
    fallback.dim = static_cast<int>(m.rows());
    fallback.inner_dim = std::min(fallback.inner_dim, fallback.dim);
    return {std::move(m), fallback};
}

inline std::vector<double> sequence_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("sequence JSON must be an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw InvalidArgument("sequence JSON must be an array of numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

}  // namespace qha
