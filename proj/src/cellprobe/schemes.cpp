#include "mplab/cellprobe/schemes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "mplab/core/errors.hpp"

namespace mplab::cellprobe {

unsigned SchemeParams::word_size() const { return w != 0 ? w : default_word_size(n, k); }

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Word b of a bitmap holds positions b*w .. b*w + w - 1, position p at bit p % w.
Word bitmap_word(const BitVec& v, std::size_t b, unsigned w) {
  Word word = 0;
  const std::size_t lo = b * w;
  const std::size_t hi = std::min(v.size(), lo + w);
  for (std::size_t p = lo; p < hi; ++p) {
    if (v.test(p)) word |= Word{1} << (p - lo);
  }
  return word;
}

void validate(const SchemeParams& p) {
  if (p.n == 0 || p.k == 0) throw ContractViolation("schemes need n >= 1 and k >= 1");
  unsigned w = p.word_size();
  if (w > 63) throw ContractViolation("word size above 63 bits is not supported");
}

// Looks up each element of `s` in the bitmap stored at `base`, one probe per
// distinct word; returns false at the first element found in T.
bool probe_bitmap(QueryContext& ctx, Address base, const std::vector<std::size_t>& positions) {
  const unsigned w = ctx.w();
  std::size_t last_word = static_cast<std::size_t>(-1);
  Word current = 0;
  for (std::size_t e : positions) {
    std::size_t b = e / w;
    if (b != last_word) {
      CellRead v = ctx.read_delta(base + b);
      if (!v) throw HarnessError("bitmap word " + std::to_string(b) + " was never written");
      current = *v;
      last_word = b;
    }
    if ((current >> (e % w)) & 1u) return false;
  }
  return true;
}

void write_bitmap(UpdateContext& ctx, Address base, const BitVec& t) {
  const unsigned w = ctx.w();
  const std::size_t words = ceil_div(t.size(), w);
  for (std::size_t b = 0; b < words; ++b) ctx.write(base + b, bitmap_word(t, b, w));
}

}  // namespace

DataStructureSpec ds_precompute_answers(const SchemeParams& params) {
  validate(params);
  const std::size_t n = params.n, k = params.k;
  const unsigned w = params.word_size();
  const std::size_t answer_words = ceil_div(k, w);
  const std::size_t set_words = ceil_div(n, w);

  DataStructureSpec ds;
  ds.name = "precompute_answers";
  ds.n = n;
  ds.k = k;
  ds.w = w;
  ds.address_space = answer_words + k * set_words;
  ds.budgets = {static_cast<double>(answer_words) / static_cast<double>(n), 0, 1};
  ds.preprocess = [=](const std::vector<BitVec>& sets, UpdateContext& ctx) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t b = 0; b < set_words; ++b) ctx.write(answer_words + i * set_words + b, bitmap_word(sets[i], b, w));
    }
  };
  ds.update = [=](const BitVec& t, UpdateContext& ctx) {
    std::vector<Word> answers(answer_words, 0);
    for (std::size_t i = 0; i < k; ++i) {
      bool disjoint = true;
      for (std::size_t b = 0; b < set_words; ++b) {
        if (ctx.read(answer_words + i * set_words + b) & bitmap_word(t, b, w)) disjoint = false;
      }
      if (disjoint) answers[i / w] |= Word{1} << (i % w);
    }
    for (std::size_t a = 0; a < answer_words; ++a) ctx.write(a, answers[a]);
  };
  ds.query = [=](QueryContext& ctx) {
    const std::size_t i = ctx.index();
    CellRead v = ctx.read_delta(i / w);
    if (!v) throw HarnessError("answer word was never written");
    return static_cast<bool>((*v >> (i % w)) & 1u);
  };
  return ds;
}

DataStructureSpec ds_store_T(const SchemeParams& params) {
  validate(params);
  const std::size_t n = params.n;
  const unsigned w = params.word_size();
  const std::size_t words = ceil_div(n, w);

  DataStructureSpec ds;
  ds.name = "store_T";
  ds.n = n;
  ds.k = params.k;
  ds.w = w;
  ds.address_space = words;
  ds.budgets = {static_cast<double>(words) / static_cast<double>(n), 0, words};
  ds.preprocess = [](const std::vector<BitVec>&, UpdateContext&) {};
  ds.update = [](const BitVec& t, UpdateContext& ctx) { write_bitmap(ctx, 0, t); };
  ds.query = [](QueryContext& ctx) { return probe_bitmap(ctx, 0, ctx.set().ones()); };
  return ds;
}

std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

namespace {

unsigned count_bits(std::size_t n) { return static_cast<unsigned>(std::max<int>(1, std::bit_width(isqrt(n)))); }
unsigned position_bits(std::size_t n) { return std::max(1u, ceil_log2(n)); }

enum AdviceMode : unsigned { kEmpty = 0, kExplicit = 1, kFallback = 2 };

BitVec encode_explicit(const BitVec& t) {
  const std::size_t n = t.size();
  const auto ones = t.ones();
  BitVec u;
  if (ones.empty()) {
    u.append_uint(kEmpty, 2);
    u.append_uint(0, count_bits(n));
  } else if (ones.size() <= isqrt(n)) {
    u.append_uint(kExplicit, 2);
    u.append_uint(ones.size(), count_bits(n));
    for (std::size_t e : ones) u.append_uint(e, position_bits(n));
  } else {
    u.append_uint(kFallback, 2);
    u.append_uint(0, count_bits(n));
  }
  return u;
}

std::vector<std::size_t> listed_positions(const BitVec& u, std::size_t n) {
  const std::size_t count = u.read_uint(2, count_bits(n));
  std::vector<std::size_t> out;
  std::size_t pos = 2 + count_bits(n);
  for (std::size_t c = 0; c < count; ++c, pos += position_bits(n)) out.push_back(u.read_uint(pos, position_bits(n)));
  return out;
}

AdviceScheme explicit_layout(std::string name) {
  AdviceScheme a;
  a.name = std::move(name);
  a.max_bits = [](std::size_t n) { return 2 + count_bits(n) + isqrt(n) * position_bits(n); };
  a.header_bits = [](std::size_t n) { return std::size_t{2} + count_bits(n); };
  a.total_bits = [](const BitVec& header, std::size_t n) {
    std::size_t hb = 2 + count_bits(n);
    if (header.read_uint(0, 2) != kExplicit) return hb;
    return hb + header.read_uint(2, count_bits(n)) * position_bits(n);
  };
  a.encode = encode_explicit;
  return a;
}

}  // namespace

AdviceScheme explicit_t_advice() {
  AdviceScheme a = explicit_layout("explicit_t");
  a.decode = [](const BitVec& u, std::size_t, const BitVec& s_i) {
    AdviceDecode d;
    switch (u.read_uint(0, 2)) {
      case kEmpty:
        d.answer = true;
        break;
      case kExplicit:
        for (std::size_t e : listed_positions(u, s_i.size())) {
          if (e < s_i.size() && s_i.test(e)) d.candidates.push_back(e);
        }
        d.answer = d.candidates.empty();
        break;
      default:
        d.fallback = true;
    }
    return d;
  };
  return a;
}

AdviceScheme planted_bad_advice() {
  AdviceScheme a = explicit_layout("planted_bad");
  a.decode = [](const BitVec& u, std::size_t, const BitVec& s_i) {
    AdviceDecode d;
    switch (u.read_uint(0, 2)) {
      case kEmpty:
        d.answer = true;
        break;
      case kExplicit:
        for (std::size_t e : listed_positions(u, s_i.size())) {
          if (e < s_i.size() && s_i.test(e)) d.candidates.push_back(e);
        }
        if (!d.candidates.empty()) d.candidates.erase(d.candidates.begin());
        break;
      default:
        d.fallback = true;
    }
    return d;
  };
  return a;
}

DataStructureSpec ds_sqrt_scheme(const SchemeParams& params, const AdviceScheme& advice) {
  validate(params);
  const std::size_t n = params.n;
  const unsigned w = params.word_size();
  const std::size_t bitmap_words = ceil_div(n, w);
  const std::size_t advice_words = ceil_div(advice.max_bits(n), w);
  const Address base = advice_words;

  DataStructureSpec ds;
  ds.name = "sqrt_scheme";
  if (advice.name != "explicit_t") ds.name += "[" + advice.name + "]";
  ds.n = n;
  ds.k = params.k;
  ds.w = w;
  ds.address_space = advice_words + bitmap_words;
  ds.budgets = {static_cast<double>(advice_words + bitmap_words) / static_cast<double>(n), 0,
                advice_words + bitmap_words};
  ds.preprocess = [](const std::vector<BitVec>&, UpdateContext&) {};
  ds.update = [=](const BitVec& t, UpdateContext& ctx) {
    BitVec u = advice.encode(t);
    if (u.size() > advice.max_bits(n)) throw HarnessError("advice longer than its declared maximum");
    for (std::size_t b = 0; b < ceil_div(u.size(), w); ++b) ctx.write(b, bitmap_word(u, b, w));
    write_bitmap(ctx, base, t);
  };
  ds.query = [=](QueryContext& ctx) {
    BitVec raw;
    auto fetch_until = [&](std::size_t bits) {
      while (raw.size() < bits) {
        CellRead v = ctx.read_delta(raw.size() / w);
        if (!v) throw HarnessError("advice word was never written");
        raw.append_uint(*v, w);
      }
    };
    const std::size_t hb = advice.header_bits(n);
    fetch_until(hb);
    const std::size_t total = advice.total_bits(raw.slice(0, hb), n);
    fetch_until(total);
    AdviceDecode d = advice.decode(raw.slice(0, total), ctx.index(), ctx.set());
    if (d.answer) {
      ctx.tag("advice-answer");
      return *d.answer;
    }
    if (d.fallback) {
      ctx.tag("fallback");
      return probe_bitmap(ctx, base, ctx.set().ones());
    }
    ctx.tag("candidates");
    std::sort(d.candidates.begin(), d.candidates.end());
    return probe_bitmap(ctx, base, d.candidates);
  };
  return ds;
}

DataStructureSpec ds_sqrt_scheme(const SchemeParams& params) { return ds_sqrt_scheme(params, explicit_t_advice()); }

std::vector<std::string> audit_advice(const AdviceScheme& advice, const MultiphaseInstance& inst) {
  std::vector<std::string> problems;
  const BitVec u = advice.encode(inst.t);
  const std::size_t limit = isqrt(inst.n);
  for (std::size_t i = 0; i < inst.k; ++i) {
    AdviceDecode d = advice.decode(u, i, inst.sets[i]);
    const std::string who = advice.name + ", query " + std::to_string(i) + ": ";
    if (d.answer) {
      if (*d.answer != inst.answer(i)) problems.push_back(who + "definite answer is wrong");
      continue;
    }
    if (d.fallback) continue;
    if (d.candidates.size() > limit) problems.push_back(who + "more than floor(sqrt n) candidates");
    for (std::size_t c : d.candidates) {
      if (c >= inst.n || !inst.sets[i].test(c)) problems.push_back(who + "candidate outside S_i");
    }
    for (std::size_t e : inst.sets[i].ones()) {
      if (inst.t.test(e) && std::find(d.candidates.begin(), d.candidates.end(), e) == d.candidates.end()) {
        problems.push_back(who + "witness " + std::to_string(e) + " missing from the candidates");
      }
    }
  }
  return problems;
}

DataStructureSpec ds_count_then_store_T(const SchemeParams& params) {
  validate(params);
  const std::size_t n = params.n, k = params.k;
  const unsigned w = params.word_size();
  const std::size_t words = ceil_div(n, w);

  DataStructureSpec ds;
  ds.name = "count_then_store_T";
  ds.n = n;
  ds.k = k;
  ds.w = w;
  ds.address_space = words + k;
  ds.budgets = {static_cast<double>(words) / static_cast<double>(n), 1, words};
  ds.preprocess = [=](const std::vector<BitVec>& sets, UpdateContext& ctx) {
    for (std::size_t i = 0; i < k; ++i) ctx.write(words + i, sets[i].count());
  };
  ds.update = [](const BitVec& t, UpdateContext& ctx) { write_bitmap(ctx, 0, t); };
  ds.query = [=](QueryContext& ctx) {
    if (ctx.read_memory(words + ctx.index()) == 0) return true;
    return probe_bitmap(ctx, 0, ctx.set().ones());
  };
  return ds;
}

std::vector<DataStructureSpec> shipped_schemes(const SchemeParams& params) {
  return {ds_precompute_answers(params), ds_store_T(params), ds_sqrt_scheme(params)};
}

}  // namespace mplab::cellprobe
