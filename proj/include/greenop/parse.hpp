#ifndef GREENOP_PARSE_HPP
#define GREENOP_PARSE_HPP

#include <string_view>

#include "greenop/exppoly.hpp"

namespace greenop {

/// Parses the expression grammar
///
///   expr    := term (('+'|'-') term)*
///   term    := factor ('*' factor)*
///   factor  := base ('^' natural)?
///   base    := rational | 'i' | var | 'exp' '(' linform ')' | '(' expr ')'
///   var     := 't' | 'x' natural
///
/// where linform is a linear combination of variables with Gaussian-rational
/// coefficients. Throws ParseError with the offending position.
ExpPoly parse_exppoly(std::string_view text);

}  // namespace greenop

#endif
