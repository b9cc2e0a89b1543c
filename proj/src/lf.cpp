#include "prepdiag/lf.hpp"

#include "prepdiag/errors.hpp"

namespace prepdiag {

Term LogicalForm::to_term() const {
  return Term::compound("utt", {Term::constant(utterance_type), body});
}

LogicalForm build_lf(const Term& semantics) {
  if (!semantics.is_compound() || semantics.name() != "utt" || semantics.arity() != 2) {
    throw UnsupportedUtteranceError("not an utterance: " + to_string(semantics));
  }
  const Term& type = semantics.children()[0];
  if (!type.is_const() || type.name() != "claim") {
    throw UnsupportedUtteranceError("unsupported utterance type: " + to_string(type));
  }
  LogicalForm lf;
  lf.utterance_type = type.name();
  lf.body = semantics.children()[1];
  return lf;
}

LogicalForm build_lf(const Sign& sign) { return build_lf(sign.semantics); }

namespace {

class Anchorer {
 public:
  Anchorer(EntityCounter& entities, AnchoredForm& out) : entities_(entities), out_(out) {}

  Term resolve(const Term& t) {
    switch (t.kind()) {
      case TermKind::Ref:
        return anchor_ref(t);
      case TermKind::Compound: {
        std::vector<Term> args;
        for (const auto& c : t.children()) args.push_back(resolve(c));
        return Term::compound(t.name(), std::move(args));
      }
      case TermKind::Lambda:
        return Term::lambda(t.name(), resolve(t.body()));
      case TermKind::App:
        return Term::apply(resolve(t.function()), resolve(t.argument()));
      default:
        return t;
    }
  }

 private:
  Term anchor_ref(const Term& ref) {
    const Term& restriction = ref.restriction();
    const std::string& param = restriction.name();
    Term body = resolve(restriction.body());

    if (body.is_compound() && body.name() == "speaker" && body.arity() == 1 &&
        body.children()[0].is_var() && body.children()[0].name() == param) {
      Term user = Term::entity(kUserEntity);
      if (!user_typed_) {
        out_.facts.emplace_back("type", std::vector<Term>{user, Term::constant("human")});
        user_typed_ = true;
      }
      out_.anchors.emplace_back(ref, user);
      return user;
    }

    Term e = entities_.fresh();
    Term reduced = beta_reduce(Term::apply(Term::lambda(param, body), e));
    bool named = false;
    for (const auto& conjunct : flatten_conjunction(reduced)) {
      if (!conjunct.is_compound() || conjunct.name() == "and" || conjunct.name() == "utt" ||
          conjunct.name() == "not") {
        throw UnsupportedRestrictionError("restriction is not a conjunction of literals: " +
                                          to_string(reduced));
      }
      Literal lit = Literal::from_term(conjunct);
      if (!lit.ground()) {
        throw UnsupportedRestrictionError("restriction leaves a free variable: " +
                                          to_string(conjunct));
      }
      if (!named && lit.arity() == 1 && lit.args[0] == e) {
        out_.entity_words[e.name()] = lit.predicate;
        named = true;
      }
      out_.facts.push_back(std::move(lit));
    }
    out_.anchors.emplace_back(ref, e);
    return e;
  }

  EntityCounter& entities_;
  AnchoredForm& out_;
  bool user_typed_ = false;
};

}  // namespace

AnchoredForm anchor(const LogicalForm& lf, EntityCounter& entities) {
  if (lf.utterance_type != "claim") {
    throw UnsupportedUtteranceError("unsupported utterance type: " + lf.utterance_type);
  }
  AnchoredForm out;
  Anchorer anchorer(entities, out);
  Term body = anchorer.resolve(lf.body);
  if (!body.is_compound() || body.name() == "and") {
    throw UnsupportedRestrictionError("utterance body is not a relation: " + to_string(body));
  }
  out.relation = Literal::from_term(body);
  if (!out.relation.ground()) {
    throw UnsupportedRestrictionError("utterance body is not ground: " + to_string(body));
  }
  out.facts.push_back(out.relation);
  return out;
}

}  // namespace prepdiag
