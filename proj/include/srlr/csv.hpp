#pragma once

#include <string>
#include <vector>

#include "srlr/dataset.hpp"

namespace srlr {

/// Loads a rectangular numeric CSV into a Dataset. `response_column` selects
/// the response by header name (when has_header) or by zero-based index (a
/// digit string always works). Covariate columns are normalized; the response
/// is left untouched. Parse problems throw std::invalid_argument with the
/// offending row/column.
Dataset load_csv(const std::string& path, const std::string& response_column, bool has_header);

/// Same, also reporting covariate column names (or x0.. when headerless) and
/// the resolved response column name.
Dataset load_csv(const std::string& path, const std::string& response_column, bool has_header,
                 std::vector<std::string>& covariate_names, std::string& response_name);

}  // namespace srlr
