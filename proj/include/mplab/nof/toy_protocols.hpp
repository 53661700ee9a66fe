#pragma once

#include <cstddef>
#include <vector>

#include "mplab/nof/protocol.hpp"

namespace mplab::nof::toy {

/// Megan broadcasts S_i verbatim, Alice stays silent, Bob answers. |Pi_i| = n + 1.
ProtocolSpec megan_broadcasts_set(std::size_t n, std::size_t k);

/// No advice, no broadcast: Alice sends S_i, Bob answers.
ProtocolSpec two_party(std::size_t n, std::size_t k);

/// Adversarial advice U = T; Alice sends S_i and Bob answers from U.
ProtocolSpec advice_equals_t(std::size_t n, std::size_t k);

/// Bob answers 1 without communication. Correct only when S_i and T are disjoint.
ProtocolSpec constant_one(std::size_t n, std::size_t k);

/// U = first bit of T. Alice opens with an empty round, Bob forwards U, Alice
/// sends S_i, Bob answers.
ProtocolSpec forward_first_bit(std::size_t n, std::size_t k);

/// U = S_1 xor T. Alice opens empty, Bob forwards U. For i = 1 Alice recovers
/// T and announces the answer; otherwise she sends S_i and Bob answers.
ProtocolSpec forward_xor_advice(std::size_t n, std::size_t k);

/// The four-party protocols used for the exact low-correlation checks.
std::vector<ProtocolSpec> four_party_suite(std::size_t n, std::size_t k);

// 1.5-round protocols ---------------------------------------------------------

/// U = T, all of it forwarded; Alice replies with the answer bit, Bob repeats it.
ProtocolSpec one_five_forward_all(std::size_t n, std::size_t k);

/// U = T, nothing forwarded; Alice replies with S_i.
ProtocolSpec one_five_forward_none(std::size_t n, std::size_t k);

/// U = T, first half forwarded. Alice replies with one bit for the first half
/// and S_i restricted to the second half.
ProtocolSpec one_five_forward_prefix(std::size_t n, std::size_t k);

/// U = explicit-T advice followed by T, the advice part is forwarded. Alice
/// replies with a definite answer, the candidate positions, or S_i on fallback.
ProtocolSpec one_five_sqrt_style(std::size_t n, std::size_t k);

std::vector<ProtocolSpec> one_five_suite(std::size_t n, std::size_t k);

}  // namespace mplab::nof::toy
