#include "mplab/cellprobe/memory.hpp"

#include <cstdio>
#include <ostream>

#include "mplab/core/errors.hpp"

namespace mplab::cellprobe {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::I:
      return "I";
    case Phase::II:
      return "II";
    case Phase::III:
      return "III";
  }
  return "?";
}

const char* to_string(Layer l) {
  switch (l) {
    case Layer::memory:
      return "M";
    case Layer::delta:
      return "delta";
    case Layer::free_set:
      return "free-S_i";
  }
  return "?";
}

const char* to_string(Op o) { return o == Op::read ? "read" : "write"; }

void ProbeLog::record(const ProbeEntry& e) {
  entries.push_back(e);
  if (e.phase != Phase::III || e.op != Op::read || e.layer == Layer::free_set) return;
  if (e.layer == Layer::memory) ++t1;
  if (e.layer == Layer::delta) ++t2;
  if (last_probe_layer_ && *last_probe_layer_ != e.layer) ++alternations;
  last_probe_layer_ = e.layer;
}

std::vector<Address> ProbeLog::probe_addresses() const {
  std::vector<Address> out;
  for (const auto& e : entries) {
    if (e.phase == Phase::III && e.layer != Layer::free_set) out.push_back(e.address);
  }
  return out;
}

void export_probe_log(std::ostream& out, const ProbeLog& log) {
  char buf[32];
  for (const auto& e : log.entries) {
    out << to_string(e.phase) << '\t' << to_string(e.layer) << '\t' << to_string(e.op) << '\t' << e.address << '\t';
    if (e.word) {
      std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(*e.word));
      out << buf;
    } else {
      out << "bot";
    }
    out << '\n';
  }
}

MemoryModel::MemoryModel(unsigned w, Address address_space) : w_(w), space_(address_space) {
  if (w < 1 || w > 64) throw ContractViolation("word size must be in [1, 64]");
  if (address_space > kMaxAddressSpace) throw ContractViolation("address space exceeds 2^26 cells");
  m_.assign(static_cast<std::size_t>(address_space), 0);
  delta_.assign(static_cast<std::size_t>(address_space), 0);
  in_delta_.assign(static_cast<std::size_t>(address_space), 0);
}

void MemoryModel::check(Address a) const {
  if (a >= space_) {
    throw HarnessError("probe to address " + std::to_string(a) + " outside the declared address space of " +
                       std::to_string(space_) + " cells");
  }
}

void MemoryModel::begin_phase(Phase p) {
  if (static_cast<int>(p) < static_cast<int>(phase_)) throw HarnessError("phases must run in order");
  phase_ = p;
}

void MemoryModel::write(Address a, Word value) {
  check(a);
  if (w_ < 64 && (value >> w_) != 0) {
    throw HarnessError("word " + std::to_string(value) + " does not fit in " + std::to_string(w_) + " bits");
  }
  switch (phase_) {
    case Phase::I:
      m_[a] = value;
      break;
    case Phase::II:
      if (!in_delta_[a]) {
        in_delta_[a] = 1;
        ++delta_count_;
      }
      delta_[a] = value;
      break;
    case Phase::III:
      throw HarnessError("queries may not write memory");
  }
}

Word MemoryModel::read_memory(Address a) const {
  check(a);
  if (phase_ == Phase::II && in_delta_[a]) return delta_[a];
  return m_[a];
}

bool MemoryModel::updated(Address a) const {
  check(a);
  return in_delta_[a] != 0;
}

CellRead MemoryModel::read_delta(Address a) const {
  check(a);
  if (!in_delta_[a]) return std::nullopt;
  return delta_[a];
}

std::vector<Address> MemoryModel::delta_addresses() const {
  std::vector<Address> out;
  for (Address a = 0; a < space_; ++a) {
    if (in_delta_[a]) out.push_back(a);
  }
  return out;
}

}  // namespace mplab::cellprobe
