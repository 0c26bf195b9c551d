#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "syncorr/correlations.hpp"
#include "syncorr/slices.hpp"
#include "syncorr/tracial.hpp"
#include "syncorr/universal3.hpp"

namespace syncorr {

using Json = nlohmann::json;

// Correlation file: {"n": int, "m": int, "p": [[[[...]]]]} nested x,y,i,j.
Json tensor_to_json(const CorrelationTensor& t);
CorrelationTensor tensor_from_json(const Json& j);

// Matrix file: {"n": int, "w": [[...]]}.
Json matrix_to_json(const CorrelationMatrix& mat);
CorrelationMatrix matrix_from_json(const Json& j);

// Model file: {"blocks": [d...], "weights": [λ...], "pvms": [[[matrix]]]}
// with pvms[x][i][k] the block-k matrix as rows of [re, im] pairs.
Json model_to_json(const TracialModel& model);
TracialModel model_from_json(const Json& j);

// Rep dump: {"a","b","t","z","has_m2","atoms":[{"diag","offdiag","kind"}]}
// where kind is the bit triple for scalar atoms or "M2".
Json rep_to_json(const Universal3Rep& rep);

// Query file: list of {"y":[...], "x":{"01":...,"02":...,"12":...},
// "cls":"q"|"loc", "side":"upper"|"lower"}.
std::vector<SliceQuery> queries_from_json(const Json& j);
Json query_to_json(const SliceQuery& q);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// 17-significant-digit decimal form, '.' separator, locale-independent.
std::string format_double(double v);

// Sample CSV: header y0..y{n−1},w01,w02,..., one row per sample, LF endings.
void write_samples_csv(const std::string& path,
                       const std::vector<DqSample>& samples, int n);
std::vector<DqSample> read_samples_csv(const std::string& path, int* n_out);

// Dominance report CSV: rows query-id,value,degenerate_path,max_residual.
void write_dominance_csv(const std::string& path,
                         const std::vector<DominanceEntry>& entries);

}  // namespace syncorr
