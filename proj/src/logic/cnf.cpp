#include <algorithm>
#include <stdexcept>

#include "uvleak/sat.hpp"

namespace uvleak {

namespace {

uint64_t pair_key(Lit a, Lit b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) | static_cast<uint32_t>(b);
}

}  // namespace

CnfBuilder::CnfBuilder() {
  new_var();
  clauses_.push_back({kTrue});
}

Lit CnfBuilder::new_var() { return ++num_vars_; }

void CnfBuilder::add_clause(std::vector<Lit> lits) {
  for (Lit l : lits)
    if (l == 0 || std::abs(l) > num_vars_) throw std::logic_error("literal out of range");
  // Drop constant-false literals, skip clauses satisfied by constants.
  std::vector<Lit> kept;
  for (Lit l : lits) {
    if (l == kTrue) return;
    if (l == kFalse) continue;
    kept.push_back(l);
  }
  clauses_.push_back(std::move(kept));
}

Lit CnfBuilder::land(Lit a, Lit b) {
  if (a == kFalse || b == kFalse || a == -b) return kFalse;
  if (a == kTrue) return b;
  if (b == kTrue || a == b) return a;
  if (a > b) std::swap(a, b);
  auto [it, fresh] = and_cache_.try_emplace(pair_key(a, b), 0);
  if (!fresh) return it->second;
  Lit x = new_var();
  it->second = x;
  clauses_.push_back({-x, a});
  clauses_.push_back({-x, b});
  clauses_.push_back({x, -a, -b});
  return x;
}

Lit CnfBuilder::lxor(Lit a, Lit b) {
  if (a == b) return kFalse;
  if (a == -b) return kTrue;
  bool flip = false;
  if (a < 0) {
    a = -a;
    flip = !flip;
  }
  if (b < 0) {
    b = -b;
    flip = !flip;
  }
  // Variable 1 is true, so a positive literal 1 here is a constant.
  if (a == kTrue) return flip ? b : -b;
  if (b == kTrue) return flip ? a : -a;
  if (a > b) std::swap(a, b);
  auto [it, fresh] = xor_cache_.try_emplace(pair_key(a, b), 0);
  if (fresh) {
    Lit x = new_var();
    it->second = x;
    clauses_.push_back({-x, a, b});
    clauses_.push_back({-x, -a, -b});
    clauses_.push_back({x, -a, b});
    clauses_.push_back({x, a, -b});
  }
  return flip ? -it->second : it->second;
}

Lit CnfBuilder::ite(Lit c, Lit t, Lit e) {
  if (c == kTrue || t == e) return t;
  if (c == kFalse) return e;
  if (t == kTrue && e == kFalse) return c;
  if (t == kFalse && e == kTrue) return -c;
  if (t == -e) return liff(c, t);
  if (t == kTrue) return lor(c, e);
  if (t == kFalse) return land(-c, e);
  if (e == kTrue) return lor(-c, t);
  if (e == kFalse) return land(c, t);
  if (c == t) return lor(c, e);
  if (c == -t) return land(-c, e);
  if (c == e) return land(c, t);
  if (c == -e) return lor(-c, t);
  if (c < 0) {
    c = -c;
    std::swap(t, e);
  }
  auto [it, fresh] = ite_cache_.try_emplace({c, t, e}, 0);
  if (!fresh) return it->second;
  Lit x = new_var();
  it->second = x;
  clauses_.push_back({-c, -t, x});
  clauses_.push_back({-c, t, -x});
  clauses_.push_back({c, -e, x});
  clauses_.push_back({c, e, -x});
  clauses_.push_back({-t, -e, x});
  clauses_.push_back({t, e, -x});
  return x;
}

Lit CnfBuilder::land_all(std::span<const Lit> ls) {
  Lit acc = kTrue;
  for (Lit l : ls) acc = land(acc, l);
  return acc;
}

Lit CnfBuilder::lor_all(std::span<const Lit> ls) {
  Lit acc = kFalse;
  for (Lit l : ls) acc = lor(acc, l);
  return acc;
}

}  // namespace uvleak
