#include "qmt/signature.hpp"

namespace qmt {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};

}  // namespace

const std::string& decl_name(const SignatureDecl& decl) {
  return std::visit([](const auto& d) -> const std::string& { return d.name; }, decl);
}

Signature Signature::unchecked(std::vector<SignatureDecl> decls) {
  Signature sig;
  sig.decls_ = std::move(decls);
  for (std::size_t i = 0; i < sig.decls_.size(); ++i) sig.index_decl(i);
  return sig;
}

void Signature::index_decl(std::size_t i) {
  const SignatureDecl& decl = decls_[i];
  const std::string& name = decl_name(decl);
  std::visit(overloaded{
                 [&](const BaseTypeDecl&) {
                   kinds_[name] = SymbolKind::BaseType;
                   singles_[name] = i;
                 },
                 [&](const ConceptDecl&) {
                   kinds_[name] = SymbolKind::Concept;
                   singles_[name] = i;
                 },
                 [&](const RelationDecl&) {
                   kinds_[name] = SymbolKind::Relation;
                   singles_[name] = i;
                 },
                 [&](const FunctionDecl&) {
                   kinds_[name] = SymbolKind::Function;
                   multis_[name].push_back(i);
                 },
                 [&](const PredicateDecl&) {
                   kinds_[name] = SymbolKind::Predicate;
                   multis_[name].push_back(i);
                 },
             },
             decl);
}

std::optional<SymbolKind> Signature::symbol_kind(const std::string& name) const {
  auto it = kinds_.find(name);
  if (it != kinds_.end()) return it->second;
  if (name_in_family(name)) return SymbolKind::Function;
  return std::nullopt;
}

bool Signature::has_base_type(const BaseTypeName& name) const {
  auto it = kinds_.find(name);
  return it != kinds_.end() && it->second == SymbolKind::BaseType;
}

const ConceptDecl* Signature::find_concept(const ConceptName& name) const {
  auto it = singles_.find(name);
  if (it == singles_.end()) return nullptr;
  return std::get_if<ConceptDecl>(&decls_[it->second]);
}

const RelationDecl* Signature::find_relation(const RelationName& name) const {
  auto it = singles_.find(name);
  if (it == singles_.end()) return nullptr;
  return std::get_if<RelationDecl>(&decls_[it->second]);
}

std::vector<FunctionDecl> Signature::function_overloads(const FunName& name) const {
  std::vector<FunctionDecl> out;
  auto it = multis_.find(name);
  if (it != multis_.end()) {
    for (std::size_t i : it->second) {
      if (const auto* f = std::get_if<FunctionDecl>(&decls_[i])) out.push_back(*f);
    }
  }
  if (family_) {
    for (auto& f : family_(name)) out.push_back(std::move(f));
  }
  return out;
}

std::vector<PredicateDecl> Signature::predicate_overloads(const PredName& name) const {
  std::vector<PredicateDecl> out;
  auto it = multis_.find(name);
  if (it != multis_.end()) {
    for (std::size_t i : it->second) {
      if (const auto* p = std::get_if<PredicateDecl>(&decls_[i])) out.push_back(*p);
    }
  }
  return out;
}

bool Signature::name_in_family(const std::string& name) const {
  return family_ && !family_(name).empty();
}

}  // namespace qmt
