#ifndef ECGID_PIPELINE_HPP
#define ECGID_PIPELINE_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ecgid/config.hpp"
#include "ecgid/eval.hpp"

namespace ecgid::pipeline {

struct Source {
    enum class Kind { wfdb_dir, csv_dir, synthetic };
    Kind kind = Kind::synthetic;
    std::filesystem::path path;  // directory for wfdb_dir / csv_dir
};

struct Options {
    /// Groups to evaluate; empty means the full 13-row reference table.
    std::vector<std::string> groups;
    bool grid = false;  // grid-search each group instead of the fixed kernel
};

/// ingest -> beats -> features -> evaluate, writing every intermediate
/// artifact under work_dir (ingest/*.json, beats.jsonl, features.csv,
/// report.json) so any later stage can be re-run standalone.
eval::EvalReport run(const config::PipelineConfig& cfg, const Source& source,
                     const Options& options, const std::filesystem::path& work_dir);

}  // namespace ecgid::pipeline

#endif
