#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "mplab/cellprobe/harness.hpp"
#include "mplab/circuits/static_ds.hpp"
#include "mplab/nof/protocol.hpp"

namespace mplab::nof {

/// Four-party protocol simulating a semi-adaptive data structure.
///
///   U      contents of the Phase-II reads served by pre-update memory, w bits
///          each, in order. Bob replays the update on T from these words.
///   Pi^M   Megan simulates Phase I and the query's memory probes:
///          (address, content) pairs of w bits each, up to the first probe of
///          the updated layer.
///   Alice  replays the query from Pi^M and Bob's replies; each round is the
///          w-bit address of the next updated-layer probe, or the answer bit
///          (halting) once the query finishes.
///   Bob    answers each address with a presence flag and w content bits.
///
/// Refuses (RefusedError) data structures that are not declared semi-adaptive
/// or that fail enforce_semi_adaptive on `check_instances` sampled instances.
ProtocolSpec ds_to_4party(const cellprobe::DataStructureSpec& ds, std::size_t check_instances = 8,
                          std::uint64_t seed = 1);

/// Per-run comparison between a data structure and its four-party simulation.
struct ReductionRun {
  Transcript transcript;
  bool ds_answer = false;
  std::size_t tq = 0;
  std::size_t phase2_probes = 0;  // Phase-II reads plus distinct writes
  double t_u = 0.0;               // phase2_probes / n
  std::size_t pi_bound = 0;       // 4 * max(1, t_q) * w
  double u_bound = 0.0;           // t_u * n * w
  bool answers_match = false;
  bool pi_ok = false;
  bool u_ok = false;
  bool ok() const { return answers_match && pi_ok && u_ok; }
};

ReductionRun check_reduction_run(const cellprobe::DataStructureSpec& ds, const ProtocolSpec& proto,
                                 const MultiphaseInstance& inst, std::size_t i);

/// Three-party restricted protocol built from a non-adaptive static data
/// structure for the problem whose rows are the sets: U is the memory image
/// (s*w bits), Alice's first round lists the probe addresses (ceil(log2 s)
/// bits each), Bob returns the contents, Alice's second round is the answer.
/// The protocol is only meaningful on instances whose sets equal the rows the
/// data structure was built for. Refuses adaptive structures, naming the query
/// and the probe that moved.
ProtocolSpec static_ds_to_3round(const circuits::StaticDS& sds, std::size_t perturbations = 16,
                                 std::uint64_t seed = 1);

/// 2*t*w + 1: addresses and contents for t probes plus the answer bit.
std::size_t static_protocol_bound(const circuits::StaticDS& sds, std::size_t probes);

/// Modified four-party protocol simulating a 1.5-round protocol: Charlie sends
/// Megan U' = forward(U), Megan broadcasts U' followed by Alice's reply, Alice
/// stays silent and Bob answers.
ProtocolSpec wrap_one_point_five(const ProtocolSpec& proto);

struct SimulationCheck {
  bool answers_match = false;
  std::size_t u_prime_bits = 0;
  std::size_t reply_bits = 0;
  std::size_t c = 0;            // max(|U'|, |reply|) + 1, the smallest C with both strictly below
  std::size_t megan_bits = 0;   // |Pi^M| of the wrapped protocol
  bool megan_ok = false;        // megan_bits <= 2C
  bool ok() const { return answers_match && megan_ok; }
};

SimulationCheck check_simulation(const ProtocolSpec& direct, const ProtocolSpec& wrapped,
                                 const MultiphaseInstance& inst, std::size_t i);

}  // namespace mplab::nof
