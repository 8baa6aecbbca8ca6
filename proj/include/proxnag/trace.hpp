#ifndef PROXNAG_TRACE_HPP
#define PROXNAG_TRACE_HPP

#include "proxnag/problem.hpp"
#include "proxnag/types.hpp"

#include <optional>
#include <vector>

namespace proxnag {

/// One iteration record. Distance columns need a reference solution and the
/// step-geometry columns only exist for the coupled two-sequence solver, so
/// everything past the objective values is optional; absent fields serialize
/// as empty CSV cells.
struct TraceRow {
  long k = 0;
  double F_x = 0.0;
  double F_v = 0.0;
  std::optional<double> gap_x;
  std::optional<double> gap_v;
  std::optional<double> V;       // ||v_k - x*||^2
  std::optional<double> X;       // ||x_k - x*||^2
  std::optional<double> D;       // ||x_k - v_k||^2
  std::optional<double> R;       // ||v_k - z_k||^2
  std::optional<double> M;       // ||v_k - x_k||^2
  std::optional<double> lyap;    // augmented Lyapunov value
  std::optional<double> energy;  // convex-case energy
  double elapsed_s = 0.0;
};

using Trace = std::vector<TraceRow>;

inline constexpr const char* kTraceCsvHeader =
    "k,F_x,F_v,gap_x,gap_v,V,X,D,R,M,lyap,energy,elapsed_s";

/// Objective gaps and distances for the pair (x_k, v_k); single-sequence
/// solvers pass the same vector twice.
TraceRow make_trace_row(const CompositeProblem& p, long k, const Vector& x,
                        const Vector& v, double elapsed_s);

/// First k whose recorded gap is <= tol; at_v selects gap_v over gap_x.
std::optional<long> first_gap_crossing(const Trace& trace, double tol,
                                       bool at_v = false);

/// Per-epoch record for the stochastic solvers: full objective on the
/// training set, its smooth/nonsmooth split, and held-out accuracy.
struct EpochRow {
  long epoch = 0;
  double objective = 0.0;
  double data_fit = 0.0;
  double reg_term = 0.0;
  std::optional<double> test_accuracy;
  double sparsity = 0.0;
  double elapsed_s = 0.0;
};

using EpochTrace = std::vector<EpochRow>;

inline constexpr const char* kEpochCsvHeader =
    "epoch,objective,data_fit,reg_term,test_accuracy,sparsity,elapsed_s";

}  // namespace proxnag

#endif  // PROXNAG_TRACE_HPP
