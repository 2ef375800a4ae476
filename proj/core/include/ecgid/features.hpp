#ifndef ECGID_FEATURES_HPP
#define ECGID_FEATURES_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ecgid/beats.hpp"

namespace ecgid::features {

/// One row per beat; `columns` names the feature columns (label and ordinal
/// are carried separately).
struct FeatureTable {
    std::vector<std::string> columns;
    std::vector<std::string> labels;
    std::vector<int> ordinals;
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const { return rows.size(); }
    int column_index(const std::string& name) const;  // -1 if missing
};

struct ExclusionCounts {
    long truncated = 0;
    long degenerate = 0;
};

struct FeatureOptions {
    bool morph = true;
    bool hpe = true;
    int L = 60;
    double delta = 10.0;
    bool include_truncated = false;
    bool include_degenerate = false;
};

/// Compute the selected descriptor groups for every beat. Flagged beats are
/// dropped by default; counts of what was dropped come back in `excluded`.
FeatureTable build_features(const std::vector<beats::Heartbeat>& heartbeats,
                            const FeatureOptions& options,
                            ExclusionCounts* excluded = nullptr);

/// CSV with header `label,ordinal,<columns...>`; floats printed shortest
/// round-trip.
std::string to_csv(const FeatureTable& table);
void write_csv(const std::filesystem::path& path, const FeatureTable& table);

FeatureTable from_csv(const std::string& text);
FeatureTable read_csv(const std::filesystem::path& path);

}  // namespace ecgid::features

#endif
