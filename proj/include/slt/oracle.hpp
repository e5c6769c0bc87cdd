#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slt {

class LabeledTreeIndex;

/// The labeled-tree queries. `label` ignores alpha.
enum class QueryKind {
  label,
  depth,
  level_ancestor,
  parent,
  deg,
  child_rank,
  child_select,
  num_descendants,
  preorder_rank,
  preorder_select,
  postorder_rank,
  postorder_select,
};

inline constexpr QueryKind kAllQueries[] = {
    QueryKind::label,         QueryKind::depth,          QueryKind::level_ancestor,  QueryKind::parent,
    QueryKind::deg,           QueryKind::child_rank,     QueryKind::child_select,    QueryKind::num_descendants,
    QueryKind::preorder_rank, QueryKind::preorder_select, QueryKind::postorder_rank, QueryKind::postorder_select,
};

std::string_view query_name(QueryKind q);
std::optional<QueryKind> parse_query_kind(std::string_view name);
/// True when the answer is a node id (0 printed as "-").
bool returns_node(QueryKind q);
/// True when the query takes a node argument x (otherwise an index i).
bool takes_node(QueryKind q);
/// True when the query takes an extra index i after the node.
bool takes_index(QueryKind q);

struct Query {
  QueryKind kind = QueryKind::label;
  std::uint32_t alpha = 0;
  std::uint64_t x = 0;  // node argument, or the index for the select queries
  std::uint64_t i = 0;  // extra index for level_ancestor / child_select
};

std::string to_string(const Query& q);

/// Pointer-based labeled tree; ids are preorder ranks 1..n.
struct PlainTree {
  std::vector<std::uint32_t> parent;                 // [0] unused, root -> 0
  std::vector<std::vector<std::uint32_t>> children;  // ordered
  std::vector<std::uint32_t> labels;                 // [0] unused
  std::uint32_t sigma = 1;

  std::uint64_t size() const { return parent.empty() ? 0 : parent.size() - 1; }
  static PlainTree from_parents(std::vector<std::uint32_t> parent, std::vector<std::uint32_t> labels,
                                std::uint32_t sigma);
  std::vector<bool> parens() const;
  std::vector<std::uint32_t> preorder_labels() const;  // labels[1..n]
};

PlainTree plain_tree_from_parens(const std::vector<bool>& parens, std::vector<std::uint32_t> preorder_labels,
                                 std::uint32_t sigma);

/// Answers a query by literal path/subtree walks. Node answers use 0 for
/// NULL. Throws std::out_of_range on invalid arguments.
std::uint64_t oracle_query(const PlainTree& t, const Query& q);

enum class LabelSkew { uniform, zipf };

/// Uniform-attachment random tree relabeled to preorder. Zipf labels use
/// exact 1/alpha proportions (largest remainder), shuffled.
PlainTree random_labeled_tree(std::uint64_t n, std::uint32_t sigma, std::uint64_t seed, LabelSkew skew);

/// All arguments for which `q` is defined on the tree: every alpha, every
/// node, and every index up to one past the last meaningful value.
std::vector<Query> all_queries(const PlainTree& t);
/// `count` random well-formed queries.
std::vector<Query> sample_queries(const PlainTree& t, std::uint64_t count, std::uint64_t seed);

struct CrossCheckReport {
  std::uint64_t queries = 0;
  std::uint64_t divergences = 0;
  std::string first_divergence;  // empty when clean; otherwise a repro line
  bool ok() const { return divergences == 0; }
};

/// Compares the index against the oracle on `samples` random queries (0 means
/// the exhaustive query set). The repro line names the seed, query and both
/// answers.
CrossCheckReport cross_check(const PlainTree& t, const LabeledTreeIndex& idx, std::uint64_t samples,
                             std::uint64_t seed);
CrossCheckReport cross_check(const PlainTree& t, const LabeledTreeIndex& idx, const std::vector<Query>& queries,
                             std::uint64_t seed);

}  // namespace slt
