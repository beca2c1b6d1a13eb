// Copyright 2026 The CI Extractor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report writers: CSV score tables with published reference columns, tag
// distributions, the per-policy histogram and a JSON summary.

#ifndef CIEXTRACT_REPORT_HPP_
#define CIEXTRACT_REPORT_HPP_

#include <filesystem>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ciextract/evaluator.hpp"
#include "json.hpp"

namespace ciex {

struct ReferenceScore {
  std::string_view method;
  CIParam param;
  double recall;
  double precision;
  double f1;
};

// Scores published for the original 36-policy evaluation. They depend on
// that corpus, its expert labels and specific external parsers, so they are
// printed next to local results for orientation only.
inline const std::vector<ReferenceScore> &ReferenceScores() {
  static const std::vector<ReferenceScore> kScores = {
      // Word level.
      {"hmm", CIParam::kAttribute, 0.65, 0.59, 0.62},
      {"hmm", CIParam::kReceiver, 0.41, 0.50, 0.45},
      {"hmm", CIParam::kSender, 0.06, 0.16, 0.09},
      {"hmm", CIParam::kTP, 0.81, 0.66, 0.73},
      {"bert", CIParam::kAttribute, 0.59, 0.43, 0.50},
      {"bert", CIParam::kReceiver, 0.52, 0.32, 0.39},
      {"bert", CIParam::kSender, 0.13, 0.14, 0.13},
      {"bert", CIParam::kTP, 0.78, 0.58, 0.67},
      // Phrase level, macro averaged over statements.
      {"qa", CIParam::kAttribute, 0.21, 0.14, 0.17},
      {"qa", CIParam::kReceiver, 0.07, 0.06, 0.06},
      {"qa", CIParam::kSender, 0.03, 0.02, 0.03},
      {"qa", CIParam::kSubject, 0.06, 0.02, 0.03},
      {"qa", CIParam::kTP, 0.21, 0.16, 0.18},
      {"dp", CIParam::kAttribute, 0.68, 0.43, 0.53},
      {"dp", CIParam::kSubject, 0.79, 0.26, 0.40},
      {"dp", CIParam::kTP, 0.76, 0.62, 0.68},
      {"srl", CIParam::kAttribute, 0.93, 0.72, 0.81},
      {"srl", CIParam::kReceiver, 0.94, 0.75, 0.83},
      {"srl", CIParam::kSender, 0.95, 0.64, 0.76},
      {"srl", CIParam::kTP, 0.91, 0.71, 0.80},
      {"ci-srl", CIParam::kAttribute, 0.91, 0.77, 0.83},
      {"ci-srl", CIParam::kReceiver, 0.88, 0.79, 0.84},
      {"ci-srl", CIParam::kSender, 0.91, 0.74, 0.82},
      {"ci-srl", CIParam::kTP, 0.90, 0.84, 0.87},
  };
  return kScores;
}

inline std::optional<ReferenceScore> FindReference(std::string_view method, CIParam param) {
  for (const ReferenceScore &r : ReferenceScores()) {
    if (r.method == method && r.param == param) return r;
  }
  return std::nullopt;
}

inline std::string FormatRatio(double value, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << value;
  return os.str();
}

inline constexpr const char *kMacroNote =
    "# precision and recall are averaged per statement; a ratio with a zero "
    "denominator (no predictions or no gold spans for a parameter) is left "
    "out of its average";

inline std::string ScoreTableHeader() {
  return "method,param,mode,recall,precision,f1,tp,fp,fn,precision_statements,"
         "recall_statements,ref_recall,ref_precision,ref_f1\n";
}

inline std::string ScoreTableRows(std::string_view method,
                                  const std::vector<ParamScore> &scores) {
  std::ostringstream os;
  for (const ParamScore &s : scores) {
    os << method << ',' << ParamName(s.param) << ',' << ScoreModeName(s.mode) << ','
       << FormatRatio(s.recall) << ',' << FormatRatio(s.precision) << ','
       << FormatRatio(s.f1) << ',' << s.support.tp << ',' << s.support.fp << ','
       << s.support.fn << ',' << s.precision_statements << ',' << s.recall_statements;
    if (std::optional<ReferenceScore> ref = FindReference(method, s.param)) {
      os << ',' << FormatRatio(ref->recall, 2) << ',' << FormatRatio(ref->precision, 2)
         << ',' << FormatRatio(ref->f1, 2);
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

inline std::string TagDistributionCsv(std::string_view method,
                                      const std::vector<TagDistributionRow> &rows) {
  std::ostringstream os;
  os << "method,tag,tp_pct,fp_pct,matched,total\n";
  for (const TagDistributionRow &r : rows) {
    os << method << ',' << r.source_tag << ',' << FormatRatio(r.tp_pct, 2) << ','
       << FormatRatio(r.fp_pct, 2) << ',' << r.matched << ',' << r.total << '\n';
  }
  return os.str();
}

inline std::string HistogramCsv(const PolicyHistogram &hist) {
  std::ostringstream os;
  os << "bin,policies\n";
  std::ostringstream below;
  below << '<' << hist.edges.front();
  os << below.str() << ',' << hist.below << '\n';
  for (size_t b = 0; b < hist.counts.size(); ++b) {
    os << hist.Label(b) << ',' << hist.counts[b] << '\n';
  }
  return os.str();
}

inline nlohmann::ordered_json ScoresToJson(const std::vector<ParamScore> &scores) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const ParamScore &s : scores) {
    nlohmann::ordered_json row;
    row["param"] = std::string(ParamName(s.param));
    row["mode"] = std::string(ScoreModeName(s.mode));
    row["recall"] = std::stod(FormatRatio(s.recall, 6));
    row["precision"] = std::stod(FormatRatio(s.precision, 6));
    row["f1"] = std::stod(FormatRatio(s.f1, 6));
    row["tp"] = s.support.tp;
    row["fp"] = s.support.fp;
    row["fn"] = s.support.fn;
    out.push_back(row);
  }
  return out;
}

inline nlohmann::ordered_json HistogramToJson(const PolicyHistogram &hist) {
  nlohmann::ordered_json out;
  out["edges"] = hist.edges;
  out["below"] = hist.below;
  out["counts"] = hist.counts;
  nlohmann::ordered_json per_policy = nlohmann::ordered_json::object();
  for (const auto &[policy, f1] : hist.policy_f1) {
    per_policy[policy] = std::stod(FormatRatio(f1, 4));
  }
  out["policy_f1"] = per_policy;
  return out;
}

inline void WriteText(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out = internal::OpenOutput(path);
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ciex

#endif  // CIEXTRACT_REPORT_HPP_
