#include "slt/oracle.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>
#include <stdexcept>

#include "slt/labeled_index.hpp"

namespace slt {

namespace {

constexpr std::array<std::string_view, 12> kNames = {
    "label",           "depth",           "level_ancestor", "parent",         "deg",            "child_rank",
    "child_select",    "num_descendants", "preorder_rank",  "preorder_select", "postorder_rank", "postorder_select",
};

void check_node(const PlainTree& t, std::uint64_t x) {
  if (x == 0 || x > t.size()) throw std::out_of_range("node " + std::to_string(x) + " out of range");
}

void check_alpha(const PlainTree& t, std::uint32_t a) {
  if (a == 0 || a > t.sigma) throw std::out_of_range("label " + std::to_string(a) + " out of range");
}

std::vector<std::uint32_t> postorder_numbers(const PlainTree& t) {
  std::vector<std::uint32_t> post(t.size() + 1, 0);
  std::uint32_t next = 0;
  // Preorder ids make a subtree the interval [x, x + size - 1]; a node's
  // postorder slot is reached once its last descendant has been numbered.
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  if (t.size() == 0) return post;
  stack.emplace_back(1, 0);
  while (!stack.empty()) {
    auto& [x, k] = stack.back();
    if (k < t.children[x].size()) {
      const std::uint32_t c = t.children[x][k++];
      stack.emplace_back(c, 0);
    } else {
      post[x] = ++next;
      stack.pop_back();
    }
  }
  return post;
}

std::uint64_t subtree_end(const PlainTree& t, std::uint64_t x) {
  std::uint64_t y = x;
  while (!t.children[y].empty()) y = t.children[y].back();
  return y;
}

}  // namespace

std::string_view query_name(QueryKind q) { return kNames[static_cast<std::size_t>(q)]; }

std::optional<QueryKind> parse_query_kind(std::string_view name) {
  for (std::size_t k = 0; k < kNames.size(); ++k)
    if (kNames[k] == name) return static_cast<QueryKind>(k);
  return std::nullopt;
}

bool returns_node(QueryKind q) {
  switch (q) {
    case QueryKind::level_ancestor:
    case QueryKind::parent:
    case QueryKind::child_select:
    case QueryKind::preorder_select:
    case QueryKind::postorder_select: return true;
    default: return false;
  }
}

bool takes_node(QueryKind q) { return q != QueryKind::preorder_select && q != QueryKind::postorder_select; }

bool takes_index(QueryKind q) { return q == QueryKind::level_ancestor || q == QueryKind::child_select; }

std::string to_string(const Query& q) {
  std::ostringstream os;
  os << query_name(q.kind);
  if (q.kind == QueryKind::label) {
    os << ' ' << q.x;
    return os.str();
  }
  os << ' ' << q.alpha << ' ' << q.x;
  if (takes_index(q.kind)) os << ' ' << q.i;
  return os.str();
}

PlainTree PlainTree::from_parents(std::vector<std::uint32_t> parent, std::vector<std::uint32_t> labels,
                                  std::uint32_t sigma) {
  PlainTree t;
  const std::size_t n = parent.empty() ? 0 : parent.size() - 1;
  if (labels.size() != parent.size()) throw std::invalid_argument("plain tree: label count mismatch");
  t.children.assign(n + 1, {});
  for (std::size_t x = 2; x <= n; ++x) {
    if (parent[x] == 0 || parent[x] >= x) throw std::invalid_argument("plain tree: parents must precede children");
    t.children[parent[x]].push_back(static_cast<std::uint32_t>(x));
  }
  if (n >= 1 && parent[1] != 0) throw std::invalid_argument("plain tree: node 1 must be the root");
  t.parent = std::move(parent);
  t.labels = std::move(labels);
  t.sigma = sigma;
  return t;
}

std::vector<bool> PlainTree::parens() const {
  std::vector<bool> out;
  out.reserve(2 * size());
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  if (size() == 0) return out;
  stack.emplace_back(1, 0);
  out.push_back(true);
  while (!stack.empty()) {
    auto& [x, k] = stack.back();
    if (k < children[x].size()) {
      const std::uint32_t c = children[x][k++];
      out.push_back(true);
      stack.emplace_back(c, 0);
    } else {
      out.push_back(false);
      stack.pop_back();
    }
  }
  return out;
}

std::vector<std::uint32_t> PlainTree::preorder_labels() const {
  return labels.empty() ? std::vector<std::uint32_t>{} : std::vector<std::uint32_t>(labels.begin() + 1, labels.end());
}

PlainTree plain_tree_from_parens(const std::vector<bool>& parens, std::vector<std::uint32_t> preorder_labels,
                                 std::uint32_t sigma) {
  std::vector<std::uint32_t> parent{0};
  std::vector<std::uint32_t> stack;
  for (bool p : parens) {
    if (p) {
      parent.push_back(stack.empty() ? 0 : stack.back());
      stack.push_back(static_cast<std::uint32_t>(parent.size() - 1));
    } else {
      if (stack.empty()) throw std::invalid_argument("plain tree: unbalanced parentheses");
      stack.pop_back();
    }
  }
  if (preorder_labels.size() != parent.size() - 1) throw std::invalid_argument("plain tree: label count mismatch");
  preorder_labels.insert(preorder_labels.begin(), 0);
  return PlainTree::from_parents(std::move(parent), std::move(preorder_labels), sigma);
}

std::uint64_t oracle_query(const PlainTree& t, const Query& q) {
  const std::uint32_t a = q.alpha;
  const std::uint64_t n = t.size();
  auto is_a = [&](std::uint64_t v) { return t.labels[v] == a; };
  if (q.kind == QueryKind::label) {
    check_node(t, q.x);
    return t.labels[q.x];
  }
  check_alpha(t, a);
  if (takes_node(q.kind)) check_node(t, q.x);
  const std::uint64_t x = q.x;

  switch (q.kind) {
    case QueryKind::depth: {
      std::uint64_t d = 0;
      for (std::uint64_t v = x; v != 0; v = t.parent[v]) d += is_a(v);
      return d;
    }
    case QueryKind::level_ancestor:
    case QueryKind::parent: {
      const std::uint64_t want = q.kind == QueryKind::parent ? 1 : q.i;
      if (want == 0) throw std::out_of_range("level_ancestor: i must be >= 1");
      std::uint64_t seen = 0;
      for (std::uint64_t v = t.parent[x]; v != 0; v = t.parent[v])
        if (is_a(v) && ++seen == want) return v;
      return kNone;
    }
    case QueryKind::deg: {
      std::uint64_t c = 0;
      for (auto y : t.children[x]) c += is_a(y);
      return c;
    }
    case QueryKind::child_rank: {
      if (t.parent[x] == 0) return 0;
      std::uint64_t c = 0;
      for (auto y : t.children[t.parent[x]])
        if (y <= x) c += is_a(y);
      return c;
    }
    case QueryKind::child_select: {
      if (q.i == 0) throw std::out_of_range("child_select: i must be >= 1");
      std::uint64_t c = 0;
      for (auto y : t.children[x])
        if (is_a(y) && ++c == q.i) return y;
      return kNone;
    }
    case QueryKind::num_descendants: {
      std::uint64_t c = 0;
      for (std::uint64_t v = x + 1; v <= subtree_end(t, x); ++v) c += is_a(v);
      return c;
    }
    case QueryKind::preorder_rank: {
      std::uint64_t c = 0;
      for (std::uint64_t v = 1; v <= x; ++v) c += is_a(v);
      return c;
    }
    case QueryKind::preorder_select: {
      std::uint64_t c = 0;
      for (std::uint64_t v = 1; v <= n; ++v)
        if (is_a(v) && ++c == q.x) return v;
      throw std::out_of_range("preorder_select: no such node");
    }
    case QueryKind::postorder_rank: {
      const auto post = postorder_numbers(t);
      std::uint64_t c = 0;
      for (std::uint64_t v = 1; v <= n; ++v) c += is_a(v) && post[v] <= post[x];
      return c;
    }
    case QueryKind::postorder_select: {
      const auto post = postorder_numbers(t);
      std::vector<std::uint64_t> by_post(n + 1);
      for (std::uint64_t v = 1; v <= n; ++v) by_post[post[v]] = v;
      std::uint64_t c = 0;
      for (std::uint64_t p = 1; p <= n; ++p)
        if (is_a(by_post[p]) && ++c == q.x) return by_post[p];
      throw std::out_of_range("postorder_select: no such node");
    }
    case QueryKind::label: break;
  }
  throw std::logic_error("unhandled query kind");
}

PlainTree random_labeled_tree(std::uint64_t n, std::uint32_t sigma, std::uint64_t seed, LabelSkew skew) {
  if (n == 0) throw std::invalid_argument("random tree: n must be >= 1");
  if (sigma == 0) throw std::invalid_argument("random tree: sigma must be >= 1");
  std::mt19937_64 rng(seed);
  // Uniform attachment in insertion order, then renumber to preorder.
  std::vector<std::vector<std::uint32_t>> kids(n + 1);
  for (std::uint64_t v = 2; v <= n; ++v)
    kids[std::uniform_int_distribution<std::uint64_t>(1, v - 1)(rng)].push_back(static_cast<std::uint32_t>(v));
  std::vector<std::uint32_t> parent(n + 1, 0);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{1, 0}};  // (old id, new parent id)
  while (!stack.empty()) {
    auto [v, p] = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto id = static_cast<std::uint32_t>(order.size());
    parent[id] = p;
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.emplace_back(*it, id);
  }

  std::vector<std::uint32_t> labels(n + 1, 0);
  if (skew == LabelSkew::uniform) {
    std::uniform_int_distribution<std::uint32_t> pick(1, sigma);
    for (std::uint64_t v = 1; v <= n; ++v) labels[v] = pick(rng);
  } else {
    double h = 0;
    for (std::uint32_t r = 1; r <= sigma; ++r) h += 1.0 / r;
    std::vector<std::uint64_t> count(sigma + 1, 0);
    std::vector<std::pair<double, std::uint32_t>> rem;
    std::uint64_t used = 0;
    for (std::uint32_t r = 1; r <= sigma; ++r) {
      const double exact = static_cast<double>(n) / (h * r);
      count[r] = static_cast<std::uint64_t>(exact);
      used += count[r];
      rem.emplace_back(exact - static_cast<double>(count[r]), r);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    for (std::size_t k = 0; used < n; ++k, ++used) ++count[rem[k % rem.size()].second];
    std::uint64_t pos = 1;
    for (std::uint32_t r = 1; r <= sigma; ++r)
      for (std::uint64_t k = 0; k < count[r]; ++k) labels[pos++] = r;
    std::shuffle(labels.begin() + 1, labels.end(), rng);
  }
  return PlainTree::from_parents(std::move(parent), std::move(labels), sigma);
}

std::vector<Query> all_queries(const PlainTree& t) {
  std::vector<Query> out;
  const std::uint64_t n = t.size();
  std::vector<std::uint64_t> depth(n + 1, 0), count(t.sigma + 1, 0);
  for (std::uint64_t v = 1; v <= n; ++v) {
    depth[v] = t.parent[v] == 0 ? 1 : depth[t.parent[v]] + 1;
    ++count[t.labels[v]];
  }
  for (std::uint64_t x = 1; x <= n; ++x) out.push_back({QueryKind::label, 0, x, 0});
  for (std::uint32_t a = 1; a <= t.sigma; ++a) {
    for (std::uint64_t x = 1; x <= n; ++x) {
      for (QueryKind k : {QueryKind::depth, QueryKind::parent, QueryKind::deg, QueryKind::child_rank,
                          QueryKind::num_descendants, QueryKind::preorder_rank, QueryKind::postorder_rank})
        out.push_back({k, a, x, 0});
      for (std::uint64_t i = 1; i <= depth[x]; ++i) out.push_back({QueryKind::level_ancestor, a, x, i});
      for (std::uint64_t i = 1; i <= t.children[x].size() + 1; ++i) out.push_back({QueryKind::child_select, a, x, i});
    }
    for (std::uint64_t i = 1; i <= count[a]; ++i) {
      out.push_back({QueryKind::preorder_select, a, i, 0});
      out.push_back({QueryKind::postorder_select, a, i, 0});
    }
  }
  return out;
}

std::vector<Query> sample_queries(const PlainTree& t, std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t n = t.size();
  std::vector<std::uint64_t> freq(t.sigma + 1, 0);
  for (std::uint64_t v = 1; v <= n; ++v) ++freq[t.labels[v]];
  // Bias alpha toward labels that occur, so frequent-label paths get exercised.
  std::vector<std::uint32_t> present;
  for (std::uint32_t a = 1; a <= t.sigma; ++a)
    if (freq[a] > 0) present.push_back(a);
  std::uniform_int_distribution<std::uint64_t> node(1, n);
  std::uniform_int_distribution<std::uint32_t> any_alpha(1, t.sigma);
  std::uniform_int_distribution<std::size_t> kind(0, std::size(kAllQueries) - 1);
  std::vector<Query> out;
  out.reserve(count);
  while (out.size() < count) {
    Query q;
    q.kind = kAllQueries[kind(rng)];
    q.alpha = (rng() % 4 != 0 || present.empty()) && !present.empty()
                  ? present[std::uniform_int_distribution<std::size_t>(0, present.size() - 1)(rng)]
                  : any_alpha(rng);
    if (q.kind == QueryKind::label) q.alpha = 0;
    if (q.kind == QueryKind::preorder_select || q.kind == QueryKind::postorder_select) {
      if (freq[q.alpha] == 0) continue;
      q.x = std::uniform_int_distribution<std::uint64_t>(1, freq[q.alpha])(rng);
    } else {
      q.x = node(rng);
    }
    if (q.kind == QueryKind::level_ancestor) {
      std::uint64_t d = 0;
      for (std::uint64_t v = q.x; v != 0; v = t.parent[v]) ++d;
      // Small i dominate; occasionally probe past the available ancestors.
      q.i = std::uniform_int_distribution<std::uint64_t>(1, std::min<std::uint64_t>(d, rng() % 2 ? 4 : d))(rng);
    }
    if (q.kind == QueryKind::child_select)
      q.i = std::uniform_int_distribution<std::uint64_t>(1, t.children[q.x].size() + 1)(rng);
    out.push_back(q);
  }
  return out;
}

CrossCheckReport cross_check(const PlainTree& t, const LabeledTreeIndex& idx, const std::vector<Query>& queries,
                             std::uint64_t seed) {
  CrossCheckReport r;
  for (const Query& q : queries) {
    ++r.queries;
    std::string want, got;
    try {
      want = std::to_string(oracle_query(t, q));
    } catch (const std::out_of_range& e) {
      want = std::string("error: ") + e.what();
    }
    try {
      got = std::to_string(idx.answer(q));
    } catch (const std::out_of_range& e) {
      got = std::string("error: ") + e.what();
    } catch (const std::exception& e) {
      got = std::string("internal error: ") + e.what();
    }
    const bool both_errors = want.rfind("error", 0) == 0 && got.rfind("error", 0) == 0;
    if (want == got || both_errors) continue;
    if (r.divergences++ == 0) {
      std::ostringstream os;
      os << "seed=" << seed << " n=" << t.size() << " sigma=" << t.sigma << " L=" << idx.config().L
         << " query=\"" << to_string(q) << "\" expected=" << want << " got=" << got;
      r.first_divergence = os.str();
    }
  }
  return r;
}

CrossCheckReport cross_check(const PlainTree& t, const LabeledTreeIndex& idx, std::uint64_t samples,
                             std::uint64_t seed) {
  return cross_check(t, idx, samples == 0 ? all_queries(t) : sample_queries(t, samples, seed), seed);
}

}  // namespace slt
