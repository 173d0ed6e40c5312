// Copyright 2026 The sealwm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEAL_ANALYSIS_HPP
#define SEAL_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "seal/error.hpp"
#include "seal/matrix.hpp"
#include "seal/svd.hpp"

namespace seal {

/// Negative-log singular spectrum of a learned update. Values are sorted
/// nondecreasing because the singular values come out nonincreasing.
struct SpectrumReport {
  std::string label;
  std::vector<double> neg_log_sigmas;
  std::size_t top_k = 0;
  std::size_t dropped_zero_count = 0;
};

struct CdfRow {
  std::string label;
  double value = 0.0;
  double cumulative_fraction = 0.0;
};

/// -ln(sigma_i) for the top_k largest singular values. Natural log; exact
/// zeros carry no finite log and are dropped with a recorded count.
inline SpectrumReport spectrum(const Matrix& delta_w, std::size_t top_k,
                               std::string label = "") {
  if (top_k < 1) throw ValidationError("spectrum: top_k must be >= 1");
  const SvdResult d = svd(delta_w);
  const std::size_t take = std::min(top_k, d.sigma.size());
  SpectrumReport rep;
  rep.label = std::move(label);
  rep.top_k = top_k;
  for (std::size_t i = 0; i < take; ++i) {
    if (d.sigma[i] == 0.0) {
      ++rep.dropped_zero_count;
      continue;
    }
    rep.neg_log_sigmas.push_back(-std::log(d.sigma[i]));
  }
  if (rep.neg_log_sigmas.empty())
    throw DegenerateInputError("spectrum: matrix has no nonzero singular values");
  return rep;
}

/// Pools spectra per label into empirical CDF rows sorted by value. With m
/// pooled values per label the i-th sorted value gets fraction i/m, so tied
/// values produce distinct fractions at the same abscissa.
inline std::vector<CdfRow> cdf_table(const std::vector<SpectrumReport>& reports) {
  if (reports.empty()) throw ValidationError("cdf_table: no reports");
  std::map<std::string, std::vector<double>> pooled;
  for (const auto& rep : reports) {
    auto& vals = pooled[rep.label];
    vals.insert(vals.end(), rep.neg_log_sigmas.begin(),
                rep.neg_log_sigmas.end());
  }
  std::vector<CdfRow> rows;
  for (auto& [label, vals] : pooled) {
    std::sort(vals.begin(), vals.end());
    const double n = static_cast<double>(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
      rows.push_back({label, vals[i], double(i + 1) / n});
  }
  return rows;
}

/// Mean difference of pooled -ln(sigma) between two labels; positive means
/// the first label's spectrum sits further right (smaller singular values).
inline double mean_neg_log_shift(const std::vector<SpectrumReport>& reports,
                                 const std::string& label_a,
                                 const std::string& label_b) {
  double sum_a = 0.0, sum_b = 0.0;
  std::size_t n_a = 0, n_b = 0;
  for (const auto& rep : reports) {
    if (rep.label == label_a) {
      for (double v : rep.neg_log_sigmas) sum_a += v;
      n_a += rep.neg_log_sigmas.size();
    } else if (rep.label == label_b) {
      for (double v : rep.neg_log_sigmas) sum_b += v;
      n_b += rep.neg_log_sigmas.size();
    }
  }
  if (n_a == 0 || n_b == 0)
    throw ValidationError("mean_neg_log_shift: missing label");
  return sum_a / double(n_a) - sum_b / double(n_b);
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string cdf_csv(const std::vector<CdfRow>& rows) {
  std::string out = "label,value,cumulative_fraction\n";
  for (const auto& row : rows) {
    out += row.label;
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += format_double(row.cumulative_fraction);
    out += '\n';
  }
  return out;
}

}  // namespace seal

#endif  // SEAL_ANALYSIS_HPP
