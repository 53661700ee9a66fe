#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mplab::cellprobe {

using Word = std::uint64_t;
using Address = std::uint64_t;
/// Result of a read; std::nullopt is the distinguished "not updated" word.
using CellRead = std::optional<Word>;

enum class Phase { I, II, III };
enum class Layer { memory, delta, free_set };
enum class Op { read, write };

const char* to_string(Phase p);
const char* to_string(Layer l);
const char* to_string(Op o);

struct ProbeEntry {
  Phase phase;
  Layer layer;
  Op op;
  Address address;
  CellRead word;
  bool operator==(const ProbeEntry&) const = default;
};

/// Ordered access record. t1/t2 count Phase-III reads of the pre-update memory
/// and of the updated cells; `alternations` counts layer switches between them.
struct ProbeLog {
  std::vector<ProbeEntry> entries;
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  std::size_t alternations = 0;

  void record(const ProbeEntry& e);
  std::size_t tq() const { return t1 + t2; }
  /// Addresses of the Phase-III probes, in order (free-set entries skipped).
  std::vector<Address> probe_addresses() const;

 private:
  std::optional<Layer> last_probe_layer_;
};

/// One tab-separated line per entry: phase, layer, op, address, word (hex or "bot").
void export_probe_log(std::ostream& out, const ProbeLog& log);

/// Pre-update memory M plus the set of cells written during the update.
/// Reads of M in Phase III see the pre-update contents; the updated layer
/// answers std::nullopt for every address not written during Phase II.
class MemoryModel {
 public:
  static constexpr Address kMaxAddressSpace = Address{1} << 26;

  MemoryModel(unsigned w, Address address_space);

  unsigned w() const noexcept { return w_; }
  Address address_space() const noexcept { return space_; }
  Phase phase() const noexcept { return phase_; }
  void begin_phase(Phase p);

  /// Phase I writes go to M, Phase II writes go to the updated layer.
  void write(Address a, Word value);
  /// Phase I/II: current value (updated layer first, then M; 0 if never written).
  /// Phase III: pre-update M.
  Word read_memory(Address a) const;
  /// True when the Phase-II read of `a` is served by the updated layer.
  bool updated(Address a) const;
  CellRead read_delta(Address a) const;

  std::size_t delta_size() const noexcept { return delta_count_; }
  std::vector<Address> delta_addresses() const;

 private:
  void check(Address a) const;

  unsigned w_;
  Address space_;
  Phase phase_ = Phase::I;
  std::vector<Word> m_;
  std::vector<Word> delta_;
  std::vector<std::uint8_t> in_delta_;
  std::size_t delta_count_ = 0;
};

}  // namespace mplab::cellprobe
