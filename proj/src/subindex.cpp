#include "subf/subindex.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "search_internal.hpp"

namespace subf {

namespace detail {

// (lower, upper) right sub-indices for the prepared context. The descending
// sweep for the upper index and ascending sweep for the lower both stop at
// the first covering clique of the probed size.
IndexPair right_index_pair(const RightSearchCtx& ctx, Budget& budget, bool need_lower) {
  IndexPair out;
  if (ctx.lb == ctx.ub) {
    out.lower = out.upper = ctx.ub;
    out.witness_min = out.witness_max = find_covering_clique(ctx, ctx.ub, budget);
    return out;
  }
  for (int s = ctx.ub;; --s) {
    if (std::uint64_t w = find_covering_clique(ctx, s, budget)) {
      out.upper = s;
      out.witness_max = w;
      break;
    }
    if (s == ctx.lb)
      throw Error("internal: no sub-factor found within the theoretical bounds");
  }
  if (!need_lower) {
    out.lower = ctx.lb;  // placeholder, caller ignores
    return out;
  }
  for (int s = ctx.lb;; ++s) {
    if (std::uint64_t w = find_covering_clique(ctx, s, budget)) {
      out.lower = s;
      out.witness_min = w;
      break;
    }
    if (s == out.upper)
      throw Error("internal: no sub-factor found within the theoretical bounds");
  }
  return out;
}

StabilityProbe probe_stability(const FiniteGroup& g, std::uint64_t a_mask, bool need_two_sided,
                               Budget& budget) {
  StabilityProbe probe;
  RightSearchCtx right(g, a_mask);
  if (right.lb == right.ub) {
    probe.right_stable = true;
    probe.right_index = right.ub;
  } else {
    IndexPair p = right_index_pair(right, budget, /*need_lower=*/true);
    probe.right_stable = p.lower == p.upper;
    probe.right_index = p.upper;
  }
  if (!probe.right_stable) {
    probe.two_sided_stable = false;
    return probe;
  }
  if (!need_two_sided) return probe;

  std::uint64_t inv_mask = g.invert_mask(a_mask);
  RightSearchCtx left(g, inv_mask);
  if (left.lb == left.ub) {
    probe.two_sided_stable = left.ub == probe.right_index;
    return probe;
  }
  IndexPair p = right_index_pair(left, budget, /*need_lower=*/true);
  probe.two_sided_stable = p.lower == p.upper && p.upper == probe.right_index;
  return probe;
}

}  // namespace detail

namespace {

void require_nonempty(const Subset& a, const char* op) {
  if (a.is_empty()) throw EmptySubsetError(std::string(op) + " requires a non-empty subset");
}

std::uint64_t side_mask(const Subset& a, Side side) {
  return side == Side::right ? a.mask() : a.group().invert_mask(a.mask());
}

}  // namespace

int upper_index(const Subset& a, Side side, const SearchOptions& opts) {
  require_nonempty(a, "upper_index");
  detail::Budget budget(opts.node_budget);
  detail::RightSearchCtx ctx(a.group(), side_mask(a, side));
  return detail::right_index_pair(ctx, budget, /*need_lower=*/false).upper;
}

int lower_index(const Subset& a, Side side, const SearchOptions& opts) {
  require_nonempty(a, "lower_index");
  detail::Budget budget(opts.node_budget);
  detail::RightSearchCtx ctx(a.group(), side_mask(a, side));
  if (ctx.lb == ctx.ub) return ctx.lb;
  for (int s = ctx.lb;; ++s) {
    if (detail::find_covering_clique(ctx, s, budget)) return s;
    if (s == ctx.ub) throw Error("internal: no sub-factor found within the theoretical bounds");
  }
}

SubIndexReport sub_index_report(const Subset& a, const SearchOptions& opts) {
  require_nonempty(a, "sub_index_report");
  const FiniteGroup& g = a.group();
  detail::Budget budget(opts.node_budget);

  detail::RightSearchCtx right(g, a.mask());
  detail::IndexPair rp = detail::right_index_pair(right, budget, /*need_lower=*/true);
  detail::RightSearchCtx left(g, g.invert_mask(a.mask()));
  detail::IndexPair lp = detail::right_index_pair(left, budget, /*need_lower=*/true);

  SubIndexReport r;
  r.upper_right = rp.upper;
  r.lower_right = rp.lower;
  r.upper_left = lp.upper;
  r.lower_left = lp.lower;
  r.bound_lower = right.lb;
  r.bound_upper = right.ub;
  r.bound_eq25 = g.order() - right.dif_size + 1;
  r.right_stable = r.upper_right == r.lower_right;
  r.left_stable = r.upper_left == r.lower_left;
  r.two_sided_stable = r.right_stable && r.left_stable && r.upper_right == r.upper_left;
  if (r.two_sided_stable) r.index = r.upper_right;
  r.partition_class = right.ub;
  r.relatively_strong_unstable_right =
      r.lower_right == r.bound_lower && r.upper_right == r.bound_upper &&
      r.lower_right < r.upper_right;
  r.witness_right_max = Subset(g, rp.witness_max).elements();
  r.witness_right_min = Subset(g, rp.witness_min).elements();
  // Left witnesses are left sub-factors: inverses of members of SubF_r(A^-1).
  r.witness_left_max = Subset(g, g.invert_mask(lp.witness_max)).elements();
  r.witness_left_min = Subset(g, g.invert_mask(lp.witness_min)).elements();
  return r;
}

bool is_index_stable_subset(const Subset& a, StabilityKind kind, const SearchOptions& opts) {
  require_nonempty(a, "is_index_stable_subset");
  const FiniteGroup& g = a.group();
  detail::Budget budget(opts.node_budget);
  switch (kind) {
    case StabilityKind::right: {
      detail::RightSearchCtx ctx(g, a.mask());
      if (ctx.lb == ctx.ub) return true;
      auto p = detail::right_index_pair(ctx, budget, /*need_lower=*/true);
      return p.lower == p.upper;
    }
    case StabilityKind::left: {
      detail::RightSearchCtx ctx(g, g.invert_mask(a.mask()));
      if (ctx.lb == ctx.ub) return true;
      auto p = detail::right_index_pair(ctx, budget, /*need_lower=*/true);
      return p.lower == p.upper;
    }
    case StabilityKind::two_sided:
      return detail::probe_stability(g, a.mask(), /*need_two_sided=*/true, budget)
          .two_sided_stable;
  }
  return false;
}

std::string report_to_json(const SubIndexReport& r) {
  nlohmann::json j;
  j["upper_right"] = r.upper_right;
  j["lower_right"] = r.lower_right;
  j["upper_left"] = r.upper_left;
  j["lower_left"] = r.lower_left;
  j["bound_lower"] = r.bound_lower;
  j["bound_upper"] = r.bound_upper;
  j["bound_eq25"] = r.bound_eq25;
  j["right_stable"] = r.right_stable;
  j["left_stable"] = r.left_stable;
  j["two_sided_stable"] = r.two_sided_stable;
  if (r.index)
    j["index"] = *r.index;
  else
    j["index"] = nullptr;
  j["partition_class"] = r.partition_class;
  j["relatively_strong_unstable_right"] = r.relatively_strong_unstable_right;
  j["witnesses"] = {{"right_max", r.witness_right_max},
                    {"right_min", r.witness_right_min},
                    {"left_max", r.witness_left_max},
                    {"left_min", r.witness_left_min}};
  return j.dump();
}

// ---------------------------------------------------------------------------
// Persisted cache: versioned header line, then one JSON record per line.
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kCacheFormat = "subf-report-cache-v1";

SubIndexReport report_from_json(const nlohmann::json& j) {
  SubIndexReport r;
  r.upper_right = j.at("upper_right");
  r.lower_right = j.at("lower_right");
  r.upper_left = j.at("upper_left");
  r.lower_left = j.at("lower_left");
  r.bound_lower = j.at("bound_lower");
  r.bound_upper = j.at("bound_upper");
  r.bound_eq25 = j.at("bound_eq25");
  r.right_stable = j.at("right_stable");
  r.left_stable = j.at("left_stable");
  r.two_sided_stable = j.at("two_sided_stable");
  if (!j.at("index").is_null()) r.index = j.at("index").get<int>();
  r.partition_class = j.at("partition_class");
  r.relatively_strong_unstable_right = j.at("relatively_strong_unstable_right");
  const auto& w = j.at("witnesses");
  r.witness_right_max = w.at("right_max").get<std::vector<ElementId>>();
  r.witness_right_min = w.at("right_min").get<std::vector<ElementId>>();
  r.witness_left_max = w.at("left_max").get<std::vector<ElementId>>();
  r.witness_left_min = w.at("left_min").get<std::vector<ElementId>>();
  return r;
}

std::string cache_key(const FiniteGroup& g, std::uint64_t mask) {
  std::ostringstream key;
  key << g.spec() << "|" << std::hex << mask;
  return key.str();
}

}  // namespace

ReportCache::ReportCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  std::string line;
  if (!std::getline(in, line)) return;
  auto header = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (header.is_discarded() || header.value("format", "") != kCacheFormat)
    throw CatalogError("unrecognized cache format in " + path_);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    entries_.emplace(j.at("key").get<std::string>(), report_from_json(j.at("report")));
  }
}

std::size_t ReportCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::optional<SubIndexReport> ReportCache::get(const FiniteGroup& g, std::uint64_t mask) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(cache_key(g, mask));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ReportCache::put(const FiniteGroup& g, std::uint64_t mask, const SubIndexReport& report) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string key = cache_key(g, mask);
  if (entries_.contains(key)) return;  // write-once
  entries_.emplace(key, report);

  bool fresh = true;
  {
    std::ifstream probe(path_);
    fresh = !probe.good();
  }
  std::ofstream out(path_, std::ios::app);
  if (fresh) out << nlohmann::json{{"format", kCacheFormat}}.dump() << "\n";
  nlohmann::json j;
  j["key"] = key;
  j["report"] = nlohmann::json::parse(report_to_json(report));
  out << j.dump() << "\n";
}

}  // namespace subf
