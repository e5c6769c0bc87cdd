#include "slt/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "slt/bits.hpp"
#include "slt/decomposition.hpp"

namespace slt {

namespace {

constexpr std::int64_t kError = -1;
constexpr std::int64_t kInternal = -2;  // a consistency check fired; never matches the oracle

std::int64_t answer_or_error(const LabeledTreeIndex& idx, const Query& q) {
  try {
    return static_cast<std::int64_t>(idx.answer(q));
  } catch (const std::out_of_range&) {
    return kError;
  } catch (const std::logic_error&) {
    return kInternal;
  }
}

std::int64_t oracle_or_error(const PlainTree& t, const Query& q) {
  try {
    return static_cast<std::int64_t>(oracle_query(t, q));
  } catch (const std::out_of_range&) {
    return kError;
  }
}

std::string show(std::int64_t v) {
  if (v == kError) return "error";
  if (v == kInternal) return "internal-error";
  return std::to_string(v);
}

std::string labels_text(const std::vector<std::uint32_t>& labels) {
  std::string s;
  for (std::uint32_t a : labels) s += (s.empty() ? "" : ",") + std::to_string(a);
  return s;
}

std::string parens_text(const std::vector<bool>& parens) {
  std::string s;
  for (bool b : parens) s += b ? '(' : ')';
  return s;
}

/// The index under test: the real one, or a reloaded copy with a flipped bit.
struct UnderTest {
  LabeledTreeIndex idx;
  std::string load_error;
};

UnderTest under_test(LabeledTreeIndex idx, bool inject_fault) {
  if (!inject_fault) return {std::move(idx), {}};
  try {
    return {LabeledTreeIndex::deserialize(flip_label_bit(idx.serialize())), {}};
  } catch (const std::exception& e) {
    return {std::move(idx), e.what()};
  }
}

void log_line(const SuiteOptions& opt, const std::string& s) {
  if (opt.log) *opt.log << s << std::endl;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Exhaustive instances: every shape, every labeling over [1,sigma]^n.
template <class Visit>
void for_each_exhaustive(std::uint64_t max_n, Visit&& visit) {
  for (std::uint64_t n = 1; n <= max_n; ++n)
    for (const auto& parens : all_trees(n))
      for (std::uint32_t sigma = 1; sigma <= 3; ++sigma) {
        std::vector<std::uint32_t> labels(n, 1);
        while (true) {
          visit(parens, labels, sigma);
          std::size_t k = 0;
          while (k < n && labels[k] == sigma) labels[k++] = 1;
          if (k == n) break;
          ++labels[k];
        }
      }
}

// sigma > n is accepted only when every label fits in [1,n].
bool clamp_rejects(const std::vector<std::uint32_t>& labels, std::uint32_t sigma) {
  if (sigma <= labels.size()) return false;
  for (std::uint32_t a : labels)
    if (a > labels.size()) return true;
  return false;
}

CriterionResult exhaustive_equivalence(const SuiteOptions& opt) {
  CriterionResult r{1, "exhaustive oracle equivalence", false, {}, {}, 0};
  std::uint64_t instances = 0, builds = 0, queries = 0, divergences = 0, rejected = 0;
  std::uint64_t last_n = 0;
  for_each_exhaustive(opt.exhaustive_max_n, [&](const std::vector<bool>& parens,
                                                const std::vector<std::uint32_t>& labels, std::uint32_t sigma) {
    ++instances;
    const std::uint64_t n = labels.size();
    if (n != last_n) {
      log_line(opt, "  criterion 1: n=" + std::to_string(n));
      last_n = n;
    }
    auto fail = [&](const std::string& why) {
      if (divergences++ == 0) r.repro = why;
    };
    if (clamp_rejects(labels, sigma)) {
      ++rejected;
      try {
        LabeledTreeIndex idx(parens, labels, sigma, IndexConfig{1});
        fail("tree=" + parens_text(parens) + " labels=" + labels_text(labels) + " sigma=" + std::to_string(sigma) +
             ": unclampable alphabet accepted");
      } catch (const std::invalid_argument&) {
      }
      return;
    }
    const PlainTree t = plain_tree_from_parens(parens, labels, std::min<std::uint32_t>(sigma, n));
    const std::vector<Query> qs = all_queries(t);
    std::vector<std::int64_t> want(qs.size());
    for (std::size_t k = 0; k < qs.size(); ++k) want[k] = oracle_or_error(t, qs[k]);
    for (std::uint32_t L = 1; L <= 3; ++L) {
      ++builds;
      IndexConfig cfg;
      cfg.L = L;
      cfg.block_size = opt.exhaustive_block;
      const UnderTest u = under_test(LabeledTreeIndex(parens, labels, sigma, cfg), opt.inject_fault);
      const std::string where = "tree=" + parens_text(parens) + " labels=" + labels_text(labels) +
                                " sigma=" + std::to_string(sigma) + " L=" + std::to_string(L);
      if (!u.load_error.empty()) {
        fail(where + ": corrupted index rejected on load (" + u.load_error + ")");
        continue;
      }
      for (std::size_t k = 0; k < qs.size(); ++k) {
        ++queries;
        const std::int64_t got = answer_or_error(u.idx, qs[k]);
        if (got != want[k])
          fail(where + " query=\"" + to_string(qs[k]) + "\" expected=" + show(want[k]) + " got=" + show(got));
      }
    }
  });
  r.pass = divergences == 0;
  std::ostringstream os;
  os << "n<=" << opt.exhaustive_max_n << " sigma<=3 L=1..3: " << instances << " labeled trees (" << rejected
     << " unclampable alphabets rejected), " << builds << " indexes, " << queries << " queries, " << divergences
     << " divergences";
  r.summary = os.str();
  return r;
}

CriterionResult random_equivalence(const SuiteOptions& opt) {
  CriterionResult r{2, "randomized oracle equivalence", false, {}, {}, 0};
  std::uint64_t queries = 0, divergences = 0, max_n = 0;
  for (std::uint64_t k = 0; k < opt.random_instances; ++k) {
    const RandomInstance in = random_instance(opt.seed, k);
    max_n = std::max(max_n, in.tree.size());
    IndexConfig cfg;
    cfg.L = in.L;
    const UnderTest u = under_test(LabeledTreeIndex(in.tree, cfg), opt.inject_fault);
    if (!u.load_error.empty()) {
      if (divergences++ == 0) r.repro = in.describe() + ": corrupted index rejected on load (" + u.load_error + ")";
      continue;
    }
    const CrossCheckReport c = cross_check(in.tree, u.idx, opt.samples, in.seed);
    queries += c.queries;
    if (!c.ok() && divergences == 0) r.repro = in.describe() + ": " + c.first_divergence;
    divergences += c.divergences;
    if (k % 50 == 49) log_line(opt, "  criterion 2: " + std::to_string(k + 1) + " instances");
  }
  r.pass = divergences == 0;
  std::ostringstream os;
  os << opt.random_instances << " instances (n<=" << max_n << ", sigma in {2,16,256}, uniform+zipf), " << queries
     << " sampled queries, " << divergences << " divergences";
  r.summary = os.str();
  return r;
}

// Verifies every per-label tree of a labeled instance for one L.
void verify_alpha_trees(const TreeShape& shape, const std::vector<std::uint32_t>& ends,
                        const std::vector<std::vector<std::uint32_t>>& by_label, std::uint32_t L,
                        const std::string& where, CheckReport& rep, double& worst_ratio, std::uint64_t& worst_size) {
  for (std::size_t a = 1; a < by_label.size(); ++a) {
    if (by_label[a].empty()) continue;
    const AlphaTree at = alpha_tree(shape, ends, by_label[a]);
    const Decomposition d = decompose(at.shape, L);
    const DecompositionReport v = verify_decomposition(at.shape, d, 8.0);
    worst_ratio = std::max(worst_ratio, v.ratio);
    worst_size = std::max(worst_size, v.max_size);
    rep.expect(v.ok(), [&] { return where + " alpha=" + std::to_string(a) + " L=" + std::to_string(L) + ": " + v.first_failure; });
    // Macro parent rule: a child component hangs at its parent's special node.
    try {
      const MacroTree m = macro_tree(at.shape, d);
      bool linked = true;
      for (std::uint64_t g = 2; g <= m.size(); ++g)
        linked = linked && m.components[m.tree.parent(g) - 1].special == m.components[g - 1].root;
      rep.expect(linked, [&] { return where + " alpha=" + std::to_string(a) + ": macro parent rule violated"; });
    } catch (const std::logic_error& e) {
      rep.expect(false, [&] { return where + " alpha=" + std::to_string(a) + ": " + e.what(); });
    }
  }
}

CriterionResult decomposition_contract(const SuiteOptions& opt) {
  CriterionResult r{3, "decomposition contract", false, {}, {}, 0};
  CheckReport rep;
  double worst_ratio = 0.0;
  std::uint64_t worst_size = 0, trees = 0;
  // Per-label trees of the exhaustive suite depend only on the shape and the
  // set of alpha-nodes, so all node subsets of all shapes cover them.
  for (std::uint64_t n = 1; n <= opt.exhaustive_max_n; ++n)
    for (const auto& parens : all_trees(n)) {
      const TreeShape shape = shape_of(OrdinalTree(parens));
      const auto ends = subtree_ends(shape);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::vector<std::uint32_t>> by_label(2);
        for (std::uint32_t x = 1; x <= n; ++x)
          if (mask >> (x - 1) & 1) by_label[1].push_back(x);
        for (std::uint32_t L = 1; L <= 3; ++L) {
          ++trees;
          verify_alpha_trees(shape, ends, by_label, L, "tree=" + parens_text(parens) + " mask=" + std::to_string(mask),
                             rep, worst_ratio, worst_size);
        }
      }
    }
  for (std::uint64_t k = 0; k < opt.random_instances; ++k) {
    const RandomInstance in = random_instance(opt.seed, k);
    const TreeShape shape{in.tree.parent};
    const auto ends = subtree_ends(shape);
    std::vector<std::vector<std::uint32_t>> by_label(in.tree.sigma + 1);
    for (std::uint32_t x = 1; x <= in.tree.size(); ++x) by_label[in.tree.labels[x]].push_back(x);
    const std::uint32_t L = in.L ? in.L : default_L(in.tree.size(), in.tree.sigma);
    for (const auto& nodes : by_label) trees += !nodes.empty();
    verify_alpha_trees(shape, ends, by_label, L, in.describe(), rep, worst_ratio, worst_size);
  }
  r.pass = rep.ok();
  r.repro = rep.first_failure;
  std::ostringstream os;
  os << trees << " per-label trees checked, " << rep.failures << " violations, worst count*L/n=" << std::fixed
     << std::setprecision(3) << worst_ratio << " (bound 8), largest component " << worst_size << " nodes";
  r.summary = os.str();
  return r;
}

CriterionResult space_accounting(const SuiteOptions& opt) {
  CriterionResult r{4, "space accounting trend", false, {}, {}, 0};
  std::ostringstream os;
  bool bounded = true;
  double first = 0.0, last = 0.0;
  for (std::uint64_t lg = 14; lg <= opt.space_max_log2; ++lg) {
    const std::uint64_t n = std::uint64_t{1} << lg;
    const PlainTree t = random_labeled_tree(n, 16, opt.seed + lg, LabelSkew::uniform);
    const LabeledTreeIndex idx(t);
    const SpaceReport s = idx.space_report();
    const double bound = 8.0 * static_cast<double>(n) / s.L * static_cast<double>(lg);
    if (static_cast<double>(s.macro_bits()) > bound) {
      bounded = false;
      if (r.repro.empty())
        r.repro = "n=2^" + std::to_string(lg) + ": macro bits " + std::to_string(s.macro_bits()) + " > " +
                  std::to_string(bound);
    }
    if (lg == 14) first = s.redundancy_per_node;
    last = s.redundancy_per_node;
    os << (lg == 14 ? "" : "; ") << "2^" << lg << ": L=" << s.L << " red/node=" << std::fixed << std::setprecision(4)
       << s.redundancy_per_node << " macro=" << s.macro_bits() << "<=" << std::setprecision(0) << bound;
    log_line(opt, "  criterion 4: n=2^" + std::to_string(lg) + " done");
  }
  const bool decreasing = opt.space_max_log2 > 14 && last < first;
  if (!decreasing && r.repro.empty()) r.repro = "redundancy per node did not decrease from 2^14 to 2^" + std::to_string(opt.space_max_log2);
  r.pass = bounded && decreasing;
  r.summary = os.str();
  return r;
}

CriterionResult scan_budget(const SuiteOptions& opt) {
  CriterionResult r{5, "scan budget", false, {}, {}, 0};
  std::uint64_t measured = 0, over = 0, worst = 0;
  double worst_fraction = 0.0;
  for (std::uint64_t k = 0; k < opt.random_instances; ++k) {
    const RandomInstance in = random_instance(opt.seed, k);
    IndexConfig cfg;
    cfg.L = in.L;
    const LabeledTreeIndex idx(in.tree, cfg);
    const std::uint64_t budget = 3 * (2 * static_cast<std::uint64_t>(idx.config().L) + 1);
    for (const Query& q : sample_queries(in.tree, opt.samples, in.seed)) {
      if (q.kind == QueryKind::label || q.alpha == 0 || q.alpha > idx.sigma() || !idx.frequent(q.alpha)) continue;
      LabeledTreeIndex::scan_counter() = 0;
      answer_or_error(idx, q);
      const std::uint64_t used = LabeledTreeIndex::scan_counter();
      ++measured;
      worst = std::max(worst, used);
      worst_fraction = std::max(worst_fraction, static_cast<double>(used) / static_cast<double>(budget));
      if (used > budget && over++ == 0)
        r.repro = in.describe() + " query=\"" + to_string(q) + "\" inspected " + std::to_string(used) +
                  " > budget " + std::to_string(budget);
    }
  }
  r.pass = over == 0 && measured > 0;
  std::ostringstream os;
  os << measured << " frequent-label queries, " << over << " over budget, max " << worst
     << " nodes inspected, max fraction of 3(2L+1) = " << std::fixed << std::setprecision(3) << worst_fraction;
  r.summary = os.str();
  return r;
}

CriterionResult serialization(const SuiteOptions& opt) {
  CriterionResult r{7, "serialization round trip", false, {}, {}, 0};
  std::uint64_t indexes = 0, queries = 0, failures = 0;
  auto fail = [&](const std::string& why) {
    if (failures++ == 0) r.repro = why;
  };
  auto round_trip = [&](const LabeledTreeIndex& idx, const std::vector<Query>& qs, const std::string& where) {
    ++indexes;
    const std::vector<std::uint8_t> bytes = idx.serialize();
    const UnderTest u = under_test(LabeledTreeIndex::deserialize(bytes), opt.inject_fault);
    if (!u.load_error.empty()) return fail(where + ": corrupted index rejected on load (" + u.load_error + ")");
    if (u.idx.serialize() != bytes) return fail(where + ": re-serialized bytes differ");
    for (const Query& q : qs) {
      ++queries;
      const std::int64_t a = answer_or_error(idx, q), b = answer_or_error(u.idx, q);
      if (a != b) return fail(where + " query=\"" + to_string(q) + "\" before=" + show(a) + " after=" + show(b));
    }
  };
  for_each_exhaustive(opt.exhaustive_max_n, [&](const std::vector<bool>& parens,
                                                const std::vector<std::uint32_t>& labels, std::uint32_t sigma) {
    if (clamp_rejects(labels, sigma)) return;
    const PlainTree t = plain_tree_from_parens(parens, labels, std::min<std::uint32_t>(sigma, labels.size()));
    const std::vector<Query> qs = all_queries(t);
    for (std::uint32_t L = 1; L <= 3; ++L) {
      IndexConfig cfg;
      cfg.L = L;
      cfg.block_size = opt.exhaustive_block;
      round_trip(LabeledTreeIndex(parens, labels, sigma, cfg), qs,
                 "tree=" + parens_text(parens) + " labels=" + labels_text(labels) + " L=" + std::to_string(L));
    }
  });
  for (std::uint64_t k = 0; k < opt.random_instances; ++k) {
    const RandomInstance in = random_instance(opt.seed, k);
    IndexConfig cfg;
    cfg.L = in.L;
    round_trip(LabeledTreeIndex(in.tree, cfg), sample_queries(in.tree, opt.samples, in.seed), in.describe());
  }
  r.pass = failures == 0;
  r.summary = std::to_string(indexes) + " indexes reloaded, " + std::to_string(queries) + " answers compared, " +
              std::to_string(failures) + " mismatches";
  return r;
}

CriterionResult module_oracles(const SuiteOptions& opt) {
  CriterionResult r{6, "module-level oracles", false, {}, {}, 0};
  CheckReport bv, seq, bp, wt;
  const double densities[] = {0.5, 0.02, 0.97, 0.1, 0.001};
  const std::uint32_t sigmas[] = {1, 2, 5, 16, 64, 255};
  const std::uint32_t blocks[] = {8, 64, 512};
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::uint64_t s = opt.seed * 7919 + k;
    bv.merge(check_bitvector(1000, densities[k % 5], s));
    seq.merge(check_sequence(1000, sigmas[k % 6], s));
    bp.merge(check_bp_tree(1000, blocks[k % 3], s));
    wt.merge(check_weighted_tree(1000, 1 + k % 3, 2 + static_cast<std::uint32_t>(k % 7), blocks[k % 3], k % 2 == 0, s));
  }
  CheckReport all;
  for (const CheckReport* c : {&bv, &seq, &bp, &wt}) all.merge(*c);
  r.pass = all.ok();
  r.repro = all.first_failure;
  std::ostringstream os;
  os << "100 instances x 10^3 elements each: bitvec " << bv.checks << " checks, sequence " << seq.checks
     << ", bp_tree " << bp.checks << ", weighted_tree " << wt.checks << "; " << all.failures << " failures";
  r.summary = os.str();
  return r;
}

}  // namespace

std::vector<std::uint8_t> flip_label_bit(std::vector<std::uint8_t> bytes) {
  ByteReader head(bytes);
  char magic[4];
  head.bytes(magic, 4);
  head.u32();
  const std::uint32_t count = head.u32();
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t tag = head.u32();
    const std::uint64_t off = head.u64();
    head.u64();
    if (tag == 2) {
      // sigma (u32), width (u32), bit count (u64), then the packed words.
      if (off + 16 >= bytes.size()) throw std::invalid_argument("label section too short");
      bytes[off + 16] ^= 1;
      return bytes;
    }
  }
  throw std::invalid_argument("no label section");
}

std::string RandomInstance::describe() const {
  std::ostringstream os;
  os << "instance " << index << " of suite seed " << suite_seed << " (" << (skew == LabelSkew::zipf ? "zipf" : "uniform")
     << " labels, seed=" << seed << " n=" << tree.size() << " sigma=" << tree.sigma
     << " L=" << (L ? std::to_string(L) : "default") << ")";
  return os.str();
}

RandomInstance random_instance(std::uint64_t seed, std::uint64_t k) {
  static constexpr std::uint32_t kSigmas[] = {2, 16, 256};
  static constexpr std::uint64_t kSizes[] = {100, 1000, 10000};
  RandomInstance in;
  in.suite_seed = seed;
  in.index = k;
  in.seed = seed * 1000003 + k;
  std::mt19937_64 rng(in.seed);
  const std::uint32_t sigma = kSigmas[k % 3];
  const LabelSkew skew = (k / 3) % 2 ? LabelSkew::zipf : LabelSkew::uniform;
  std::uint64_t base = kSizes[(k / 6) % 3];
  if (base < sigma) base = 3 * sigma;  // keep every label representable
  const std::uint64_t n = base - rng() % (base / 4);
  switch (k % 4) {
    case 2: in.L = 1 + static_cast<std::uint32_t>((k / 4) % 3); break;
    case 3: in.L = 4 + static_cast<std::uint32_t>((k / 4) % 5); break;
    default: in.L = 0;
  }
  in.skew = skew;
  in.tree = random_labeled_tree(n, sigma, in.seed, skew);
  return in;
}

CriterionResult run_criterion(int id, const SuiteOptions& opt) {
  const Stopwatch clock;
  CriterionResult r;
  switch (id) {
    case 1: r = exhaustive_equivalence(opt); break;
    case 2: r = random_equivalence(opt); break;
    case 3: r = decomposition_contract(opt); break;
    case 4: r = space_accounting(opt); break;
    case 5: r = scan_budget(opt); break;
    case 6: r = module_oracles(opt); break;
    case 7: r = serialization(opt); break;
    default: throw std::out_of_range("no criterion " + std::to_string(id));
  }
  static constexpr double kBudgets[] = {0, 120, 300, 0, 300, 0, 120, 0};
  r.seconds = clock.seconds();
  r.budget = kBudgets[id];
  if (opt.enforce_budgets && r.budget > 0 && r.seconds > r.budget) {
    if (r.pass) r.repro = "elapsed " + std::to_string(r.seconds) + "s exceeds the " + std::to_string(r.budget) + "s budget";
    r.pass = false;
  }
  return r;
}

std::string format_result(const CriterionResult& r, bool timing) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << ' ' << r.id << ' ' << r.name;
  if (timing) {
    os << " (" << std::fixed << std::setprecision(1) << r.seconds << "s";
    if (r.budget > 0) os << " of " << std::setprecision(0) << r.budget << "s";
    os << ")";
  }
  os << ": " << r.summary;
  if (!r.pass && !r.repro.empty()) os << "\n  repro: " << r.repro;
  return os.str();
}

}  // namespace slt
