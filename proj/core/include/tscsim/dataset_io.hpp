#pragma once

#include "tscsim/simulators.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tscsim {

enum class DataFormat { Arff, Csv };

DataFormat data_format_from_string(std::string_view name);
std::string_view file_extension(DataFormat format);

/// Formats a value the way every text artifact does: printf("%.6g").
std::string format_value(double value);

/// ARFF: @relation, numeric att1..attN, nominal `target {0,1}`, @data rows.
void write_arff(std::ostream& out, const std::string& relation,
                const std::vector<LabeledSeries>& series);
/// CSV: header att1..attN,target then one row per series.
void write_csv(std::ostream& out, const std::vector<LabeledSeries>& series);

/// Parses one half of a dataset. `source` only labels error messages.
std::vector<LabeledSeries> read_arff(std::istream& in, const std::string& source = "<arff>");
std::vector<LabeledSeries> read_csv(std::istream& in, const std::string& source = "<csv>");

struct WrittenFiles {
    std::filesystem::path train;
    std::filesystem::path test;
};

/// Writes `<dir>/<meta.name>_TRAIN.<ext>` and `<dir>/<meta.name>_TEST.<ext>`.
/// Throws InvalidSpecError on an empty dataset and IoError when the files
/// cannot be written.
WrittenFiles write_dataset(const DatasetPair& ds, DataFormat format,
                           const std::filesystem::path& directory);

/// Reads one half (train or test file). Throws IoError or ParseError.
std::vector<LabeledSeries> read_dataset(const std::filesystem::path& path, DataFormat format);

} // namespace tscsim
