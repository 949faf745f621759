#pragma once

#include <optional>
#include <string_view>

#include "folio/logic.hpp"

namespace folio {

// Grammar:
//   formula := disj
//   disj    := conj ('|' conj)*
//   conj    := unary ('&' unary)*
//   unary   := '!' unary | quant | '(' formula ')' | atom
//   quant   := ('exists' | 'forall') var+ '.' formula
//   atom    := IDENT '(' var (',' var)* ')'
//   var     := IDENT (':' IDENT)?
// A quantifier body extends to the end of the enclosing parenthesized group.
//
// A variable name denotes one variable throughout the text, so its sort is
// fixed by annotations and by the arities of the atoms it occurs in; names
// constrained by neither get sort "U".
Formula parse_formula(std::string_view text, const Signature& sig);

// As above, but the signature is inferred from the atoms.
Formula parse_formula(std::string_view text);

}  // namespace folio
