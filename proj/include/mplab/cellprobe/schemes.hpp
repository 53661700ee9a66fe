#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mplab/cellprobe/harness.hpp"

namespace mplab::cellprobe {

struct SchemeParams {
  std::size_t n = 0;
  std::size_t k = 0;
  unsigned w = 0;  // 0 selects default_word_size(n, k)

  unsigned word_size() const;
};

/// Phase II reads every stored set and writes ceil(k/w) answer words; a query is
/// a single lookup in the updated layer.
DataStructureSpec ds_precompute_answers(const SchemeParams& params);

/// Phase II writes T's bitmap; a query probes the distinct words holding the
/// elements of S_i and stops at the first hit.
DataStructureSpec ds_store_T(const SchemeParams& params);

/// What a query learns from the advice U (together with i and S_i only).
struct AdviceDecode {
  std::optional<bool> answer;          // definite answer
  std::vector<std::size_t> candidates;  // otherwise: positions of S_i to look up in T
  bool fallback = false;               // otherwise: probe the whole bitmap restricted to S_i
};

/// Advice layout: `header_bits` bits come first; after reading them, the query
/// learns the full length via `total_bits`.
struct AdviceScheme {
  std::string name;
  std::function<std::size_t(std::size_t n)> max_bits;
  std::function<std::size_t(std::size_t n)> header_bits;
  std::function<std::size_t(const BitVec& header, std::size_t n)> total_bits;
  std::function<BitVec(const BitVec& t)> encode;
  std::function<AdviceDecode(const BitVec& u, std::size_t i, const BitVec& s_i)> decode;
};

/// floor(sqrt(n)).
std::size_t isqrt(std::size_t n);

/// Explicit-T advice: [mode:2][count][positions]. Mode 0 means T is empty, mode 1
/// lists T when |T| <= floor(sqrt n) (positions use max(1, ceil(log2 n)) bits),
/// mode 2 means fall back to the bitmap.
AdviceScheme explicit_t_advice();

/// Deliberately broken advice that drops one witness from the candidate set;
/// used to show that soundness failures are caught.
AdviceScheme planted_bad_advice();

/// Phase II writes U, then T's bitmap. The query reads all advice words, decodes,
/// then probes T only at candidate positions (or the whole S_i on fallback).
/// Tags: "advice-answer", "candidates", "fallback".
DataStructureSpec ds_sqrt_scheme(const SchemeParams& params, const AdviceScheme& advice);
DataStructureSpec ds_sqrt_scheme(const SchemeParams& params);

/// Contract check of an advice scheme on one instance: for every i, a definite
/// answer must be correct; candidates must lie in S_i, number at most
/// floor(sqrt n), and contain every element of S_i that is in T.
std::vector<std::string> audit_advice(const AdviceScheme& advice, const MultiphaseInstance& inst);

/// Test scheme that makes a memory probe before touching the updated layer:
/// Phase I stores |S_i| in M, a query reads it and answers 1 straight away when
/// S_i is empty, otherwise behaves like ds_store_T.
DataStructureSpec ds_count_then_store_T(const SchemeParams& params);

/// The three shipped schemes, in a fixed order.
std::vector<DataStructureSpec> shipped_schemes(const SchemeParams& params);

}  // namespace mplab::cellprobe
