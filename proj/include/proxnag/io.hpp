#ifndef PROXNAG_IO_HPP
#define PROXNAG_IO_HPP

#include "proxnag/certificates.hpp"
#include "proxnag/problems.hpp"
#include "proxnag/trace.hpp"
#include "proxnag/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace proxnag {

// ---------------------------------------------------------------------------
// IDX binary tensors (big-endian header, unsigned-byte payload).
// ---------------------------------------------------------------------------

struct IdxTensor {
  std::vector<Index> dims;
  std::vector<std::uint8_t> payload;

  Index element_count() const {
    Index n = 1;
    for (Index d : dims) n *= d;
    return n;
  }
};

/// Header: two zero bytes, element-type byte (only 0x08 = unsigned byte is
/// supported), rank byte, then rank big-endian 4-byte dims. Parse errors name
/// the byte offset.
IdxTensor load_idx(const std::string& path);

/// Flattens rank-(>=2) image tensors to rows scaled into [0,1] and attaches
/// the rank-1 labels.
ClassificationInstance to_features(const IdxTensor& images,
                                   const IdxTensor& labels);

// ---------------------------------------------------------------------------
// CSV: traces, epoch traces, dense matrices.
// ---------------------------------------------------------------------------

/// Writes the fixed trace schema; absent optional fields become empty cells,
/// NaN anywhere is an error. Values round-trip at 17 significant digits.
void write_trace_csv(const Trace& trace, const std::string& path);
Trace read_trace_csv(const std::string& path);

void write_epoch_csv(const EpochTrace& trace, const std::string& path);
EpochTrace read_epoch_csv(const std::string& path);

void write_matrix_csv(const Matrix& m, const std::string& path);
Matrix read_matrix_csv(const std::string& path);
void write_vector_csv(const Vector& v, const std::string& path);
Vector read_vector_csv(const std::string& path);

// ---------------------------------------------------------------------------
// Flat key=value files (instance metadata, reports, echoed configs).
// ---------------------------------------------------------------------------

using KeyValues = std::map<std::string, std::string>;

void write_keyvalues(const KeyValues& kv, const std::string& path);
KeyValues read_keyvalues(const std::string& path);

// ---------------------------------------------------------------------------
// Instance directories: A.csv, b.csv, meta.txt, reference.csv.
// ---------------------------------------------------------------------------

void save_instance_dir(const ElasticNetInstance& instance,
                       const ReferenceSolution& ref, const std::string& dir);
void save_instance_dir(const GroupLassoInstance& instance,
                       const ReferenceSolution& ref, const std::string& dir);
void save_instance_dir(const ClassificationInstance& instance,
                       const std::string& dir);

/// Loaded deterministic instance: the composite problem with its reference
/// attached, plus the metadata needed to rebuild penalties and partitions.
struct LoadedInstance {
  CompositeProblem problem;
  KeyValues meta;
};

LoadedInstance load_instance_dir(const std::string& dir);
ClassificationInstance load_classification_dir(const std::string& dir);

// ---------------------------------------------------------------------------
// Certificate reports.
// ---------------------------------------------------------------------------

/// Flat key-value report; when violations exist they also land in
/// <path>.violations.csv with columns k,kind,slack.
void write_certificate_report(const CertificateReport& report,
                              const std::string& path);

}  // namespace proxnag

#endif  // PROXNAG_IO_HPP
