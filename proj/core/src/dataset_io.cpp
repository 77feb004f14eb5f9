#include "tscsim/dataset_io.hpp"

#include "tscsim/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace tscsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) {
        s.remove_suffix(1);
    }
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
    return line.size() >= keyword.size() && lower(line.substr(0, keyword.size())) == keyword;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(begin)));
            break;
        }
        fields.push_back(trim(line.substr(begin, comma - begin)));
        begin = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view token, const std::string& source, std::size_t line) {
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || token.empty()) {
        throw ParseError(source, line, "not a number: '" + std::string(token) + "'");
    }
    return value;
}

int parse_label(std::string_view token, const std::string& source, std::size_t line) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty() || value < 0) {
        throw ParseError(source, line, "invalid class label '" + std::string(token) + "'");
    }
    return value;
}

std::size_t series_length(const std::vector<LabeledSeries>& series) {
    if (series.empty()) {
        return 0;
    }
    const std::size_t n = series.front().values.size();
    for (const auto& s : series) {
        if (s.values.size() != n) {
            throw InvalidSpecError("series lengths differ; datasets must be rectangular");
        }
    }
    return n;
}

void write_row(std::ostream& out, const LabeledSeries& s) {
    for (const double v : s.values) {
        out << format_value(v) << ',';
    }
    out << s.label << '\n';
}

} // namespace

DataFormat data_format_from_string(std::string_view name) {
    const auto key = lower(name);
    if (key == "arff") {
        return DataFormat::Arff;
    }
    if (key == "csv") {
        return DataFormat::Csv;
    }
    throw ConfigError("unknown data format '" + std::string(name) + "'");
}

std::string_view file_extension(DataFormat format) {
    return format == DataFormat::Arff ? "arff" : "csv";
}

std::string format_value(double value) {
    char buffer[32];
    const int written = std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return {buffer, static_cast<std::size_t>(std::max(written, 0))};
}

void write_arff(std::ostream& out, const std::string& relation,
                const std::vector<LabeledSeries>& series) {
    const std::size_t n = series_length(series);
    out << "@relation " << relation << "\n\n";
    for (std::size_t i = 1; i <= n; ++i) {
        out << "@attribute att" << i << " numeric\n";
    }
    out << "@attribute target {0,1}\n\n@data\n";
    for (const auto& s : series) {
        write_row(out, s);
    }
}

void write_csv(std::ostream& out, const std::vector<LabeledSeries>& series) {
    const std::size_t n = series_length(series);
    for (std::size_t i = 1; i <= n; ++i) {
        out << "att" << i << ',';
    }
    out << "target\n";
    for (const auto& s : series) {
        write_row(out, s);
    }
}

std::vector<LabeledSeries> read_arff(std::istream& in, const std::string& source) {
    std::vector<LabeledSeries> out;
    std::vector<std::string> classValues;
    std::size_t numericAttributes = 0;
    bool sawClass = false;
    bool inData = false;
    bool sawAnything = false;
    std::string raw;
    std::size_t lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        sawAnything = true;
        if (!inData) {
            if (starts_with_keyword(line, "@relation")) {
                continue;
            }
            if (starts_with_keyword(line, "@attribute")) {
                if (sawClass) {
                    throw ParseError(source, lineNo, "attribute after the nominal class attribute");
                }
                const auto open = line.find('{');
                if (open == std::string_view::npos) {
                    const auto rest = lower(trim(line.substr(10)));
                    if (rest.find("numeric") == std::string::npos &&
                        rest.find("real") == std::string::npos) {
                        throw ParseError(source, lineNo, "only numeric attributes are supported");
                    }
                    ++numericAttributes;
                    continue;
                }
                const auto close = line.find('}', open);
                if (close == std::string_view::npos) {
                    throw ParseError(source, lineNo, "unterminated nominal value list");
                }
                for (const auto value : split_fields(line.substr(open + 1, close - open - 1))) {
                    classValues.emplace_back(value);
                }
                sawClass = true;
                continue;
            }
            if (starts_with_keyword(line, "@data")) {
                if (!sawClass) {
                    throw ParseError(source, lineNo, "missing nominal class attribute");
                }
                inData = true;
                continue;
            }
            throw ParseError(source, lineNo, "unexpected header line '" + std::string(line) + "'");
        }
        const auto fields = split_fields(line);
        if (fields.size() != numericAttributes + 1) {
            throw ParseError(source, lineNo,
                             "row has " + std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(numericAttributes + 1));
        }
        LabeledSeries s;
        s.values.reserve(numericAttributes);
        for (std::size_t i = 0; i < numericAttributes; ++i) {
            s.values.push_back(parse_double(fields[i], source, lineNo));
        }
        const auto it = std::find(classValues.begin(), classValues.end(), fields.back());
        if (it == classValues.end()) {
            throw ParseError(source, lineNo,
                             "class value '" + std::string(fields.back()) + "' not declared");
        }
        s.label = parse_label(*it, source, lineNo);
        out.push_back(std::move(s));
    }
    if (!sawAnything) {
        throw ParseError(source, 1, "empty file");
    }
    if (!inData) {
        throw ParseError(source, lineNo, "missing @data section");
    }
    return out;
}

std::vector<LabeledSeries> read_csv(std::istream& in, const std::string& source) {
    std::vector<LabeledSeries> out;
    std::string raw;
    std::size_t lineNo = 0;
    std::size_t columns = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        const auto line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (columns == 0) {
            if (fields.size() < 2) {
                throw ParseError(source, lineNo, "header needs at least one value column and a label");
            }
            columns = fields.size();
            continue;
        }
        if (fields.size() != columns) {
            throw ParseError(source, lineNo,
                             "ragged row " + std::to_string(lineNo) + ": " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(columns));
        }
        LabeledSeries s;
        s.values.reserve(columns - 1);
        for (std::size_t i = 0; i + 1 < columns; ++i) {
            s.values.push_back(parse_double(fields[i], source, lineNo));
        }
        s.label = parse_label(fields.back(), source, lineNo);
        out.push_back(std::move(s));
    }
    if (columns == 0) {
        throw ParseError(source, 1, "empty file");
    }
    return out;
}

WrittenFiles write_dataset(const DatasetPair& ds, DataFormat format,
                           const std::filesystem::path& directory) {
    if (ds.train.empty() && ds.test.empty()) {
        throw InvalidSpecError("refusing to write an empty dataset");
    }
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw IoError("cannot create directory " + directory.string() + ": " + ec.message());
    }
    const auto ext = std::string(file_extension(format));
    WrittenFiles files{directory / (ds.meta.name + "_TRAIN." + ext),
                       directory / (ds.meta.name + "_TEST." + ext)};
    const auto emit = [&](const std::filesystem::path& path, const std::vector<LabeledSeries>& half,
                          const std::string& relation) {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot open " + path.string() + " for writing");
        }
        if (format == DataFormat::Arff) {
            write_arff(out, relation, half);
        } else {
            write_csv(out, half);
        }
        out.flush();
        if (!out) {
            throw IoError("write failed for " + path.string());
        }
    };
    emit(files.train, ds.train, ds.meta.name + "_TRAIN");
    emit(files.test, ds.test, ds.meta.name + "_TEST");
    return files;
}

std::vector<LabeledSeries> read_dataset(const std::filesystem::path& path, DataFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return format == DataFormat::Arff ? read_arff(in, path.string()) : read_csv(in, path.string());
}

} // namespace tscsim
