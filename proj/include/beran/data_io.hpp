#pragma once

#include "beran/sample.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace beran {

struct DatasetSchema {
    std::string covariate_column = "x";
    std::string time_column = "z";
    std::string status_column = "delta";
    /// Categorical columns kept for filtering. Empty keeps every other column.
    std::vector<std::string> filter_columns;
    void validate() const;
};

struct DatasetStats {
    std::size_t rows = 0;
    std::size_t events = 0;
    double censoring_fraction = 0.0;
};

struct Dataset {
    SurvivalSample sample;
    /// Factor name -> value per row, in file order.
    std::map<std::string, std::vector<std::string>> factors;
    DatasetStats stats;
};

/// Column -> accepted values; a row passes when every listed column matches.
using SubpopulationFilter = std::map<std::string, std::set<std::string>>;

Dataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema = {});
Dataset parse_csv(const std::string& text, const DatasetSchema& schema = {}, const std::string& source = "<input>");

/// Writes x,z,delta[,factors...] with 17 significant digits.
void save_csv(const std::filesystem::path& path, const Dataset& data, const DatasetSchema& schema = {});
void save_csv(const std::filesystem::path& path, const SurvivalSample& sample);

Dataset filter_subpopulation(const Dataset& data, const SubpopulationFilter& filter);

DatasetStats describe(const SurvivalSample& sample);

} // namespace beran
