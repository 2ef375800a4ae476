#ifndef ECGID_STAGE_IO_HPP
#define ECGID_STAGE_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "ecgid/beats.hpp"
#include "ecgid/wfdb.hpp"

namespace ecgid::stage {

/// Output of the ingest stage: one channel in millivolts plus the bound beat
/// annotations.
struct IngestedRecord {
    std::string label;
    double fs = 0.0;
    int channel = 0;
    std::string provenance;  // file | csv | synthetic
    std::vector<double> signal_mv;
    std::vector<long> beat_samples;
};

IngestedRecord ingest_record(const wfdb::SignalRecord& record,
                             const wfdb::AnnotationSet& anns, int channel,
                             const std::string& label);

std::string ingest_to_json(const IngestedRecord& rec);
IngestedRecord ingest_from_json(const std::string& text);
void write_ingest(const std::filesystem::path& path, const IngestedRecord& rec);
IngestedRecord read_ingest(const std::filesystem::path& path);

/// Beats stage file: JSON lines, a header object then one object per beat.
struct BeatsFile {
    double fs = 0.0;
    beats::WindowSpec spec;
    std::vector<beats::Heartbeat> items;
};

std::string beats_to_jsonl(const BeatsFile& file);
BeatsFile beats_from_jsonl(const std::string& text);
void write_beats(const std::filesystem::path& path, const BeatsFile& file);
BeatsFile read_beats(const std::filesystem::path& path);

/// Cut beats for one ingested record (ordinals restart per record).
std::vector<beats::Heartbeat> cut_record_beats(const IngestedRecord& rec,
                                               const beats::WindowSpec& spec);

}  // namespace ecgid::stage

#endif
