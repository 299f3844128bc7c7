#include "qmt/sugar.hpp"

#include <set>
#include <stdexcept>

namespace qmt {

bool is_predefined_fun(const std::string& name) {
  return name == kSingletonFun || name == kUnionFun;
}

bool is_predefined_pred(const std::string& name) {
  return name == kEqualPred || name == kMemberPred;
}

bool is_reserved_symbol(const std::string& name) {
  return is_predefined_fun(name) || is_predefined_pred(name);
}

Signature install_predefined(Signature sig) {
  sig.enable_predefined();
  return sig;
}

QueryExpr singleton(QueryExpr element) {
  return QueryExpr::apply(kSingletonFun, {std::move(element)});
}

bool is_component_var(const VarName& name, std::size_t* index_out) {
  if (name.size() < 2 || name[0] != '_') return false;
  std::size_t value = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return false;
    value = value * 10 + static_cast<std::size_t>(name[i] - '0');
  }
  if (index_out) *index_out = value;
  return true;
}

namespace {

VarName fresh_var(const std::string& base, const std::set<VarName>& avoid) {
  if (!avoid.count(base)) return base;
  for (int i = 1;; ++i) {
    VarName candidate = base + std::to_string(i);
    if (!avoid.count(candidate)) return candidate;
  }
}

}  // namespace

QueryExpr desugar_replacement(const ReplacementForm& form) {
  if (form.generators.empty()) {
    throw std::invalid_argument("replacement requires at least one generator");
  }
  QueryExpr out = singleton(form.body);
  for (std::size_t i = form.generators.size(); i-- > 0;) {
    const Generator& gen = form.generators[i];
    out = QueryExpr::big_union(gen.var, gen.domain, std::move(out));
  }
  return out;
}

QueryExpr desugar_select(const SelectForm& form) {
  if (form.indices.empty()) {
    throw std::invalid_argument("select requires at least one index");
  }
  std::set<VarName> avoid = free_vars(form.where);
  auto from_free = free_vars(form.from);
  avoid.insert(from_free.begin(), from_free.end());
  VarName inner = fresh_var("row", avoid);
  avoid.insert(inner);
  VarName outer = fresh_var("sel", avoid);

  // Component references _i in the filter become projections of the row.
  std::map<VarName, QueryExpr> components;
  for (const VarName& name : free_vars(form.where)) {
    std::size_t index = 0;
    if (is_component_var(name, &index)) {
      components.emplace(name, QueryExpr::proj(QueryExpr::var(inner), index));
    }
  }
  PropExpr filter = substitute(form.where, components);
  QueryExpr filtered = QueryExpr::comprehension(inner, form.from, std::move(filter));

  std::vector<QueryExpr> picked;
  picked.reserve(form.indices.size());
  for (std::size_t index : form.indices) {
    picked.push_back(QueryExpr::proj(QueryExpr::var(outer), index));
  }
  QueryExpr body = picked.size() == 1 ? std::move(picked.front())
                                      : QueryExpr::tuple(std::move(picked));
  return QueryExpr::big_union(outer, std::move(filtered), singleton(std::move(body)));
}

QueryExpr desugar_for_let(const ForLetForm& form) {
  std::set<VarName> avoid = free_vars(form.body);
  for (const auto& v : free_vars(form.where)) avoid.insert(v);
  for (const auto& v : free_vars(form.source)) avoid.insert(v);
  for (const auto& v : free_vars(form.bound)) avoid.insert(v);
  avoid.insert(form.var);
  avoid.insert(form.let_var);
  VarName pair_var = fresh_var("pair", avoid);

  // Pairs (x, q(x)) for x from the source.
  QueryExpr pairs = desugar_replacement(ReplacementForm{
      {Generator{form.var, form.source}},
      QueryExpr::tuple({QueryExpr::var(form.var), form.bound})});

  std::map<VarName, QueryExpr> open_pair{
      {form.var, QueryExpr::proj(QueryExpr::var(pair_var), 1)},
      {form.let_var, QueryExpr::proj(QueryExpr::var(pair_var), 2)}};
  PropExpr filter = substitute(form.where, open_pair);
  QueryExpr kept = QueryExpr::comprehension(pair_var, std::move(pairs), std::move(filter));
  QueryExpr body = substitute(form.body, open_pair);
  return QueryExpr::big_union(pair_var, std::move(kept), std::move(body));
}

QueryExpr desugar_dl_box(const DlBoxForm& form) {
  std::set<VarName> avoid = free_vars(form.filler);
  VarName member = fresh_var("x", avoid);
  avoid.insert(member);
  VarName successor = fresh_var("y", avoid);
  PropExpr all_inside = PropExpr::forall_in(
      successor, QueryExpr::rel_image(form.rel, QueryExpr::var(member)),
      PropExpr::pred(kMemberPred, {QueryExpr::var(successor), form.filler}));
  return QueryExpr::comprehension(member, QueryExpr::concept_ref(form.concept_name),
                                  std::move(all_inside));
}

QueryExpr desugar(const SugarForm& form) {
  return std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ReplacementForm>) return desugar_replacement(f);
        if constexpr (std::is_same_v<T, SelectForm>) return desugar_select(f);
        if constexpr (std::is_same_v<T, ForLetForm>) return desugar_for_let(f);
        if constexpr (std::is_same_v<T, DlBoxForm>) return desugar_dl_box(f);
      },
      form);
}

}  // namespace qmt
