#pragma once

#include <string>

#include "symclu/types.hpp"

namespace symclu {

enum class DatasetFormat { kLabelLast, kFeaturesOnly };

DatasetFormat format_from_string(const std::string& name);
std::string format_name(DatasetFormat format);

/// Reads a CSV with one sample per row. With kLabelLast the last column must
/// hold integer class ids and becomes the label vector. Ragged rows,
/// non-numeric cells, non-finite values and n < 2 are rejected with a
/// descriptive message.
DataMatrix load_dataset(const std::string& path, DatasetFormat format);

}  // namespace symclu
