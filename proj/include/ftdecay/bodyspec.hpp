#pragma once

#include <string>

#include "ftdecay/geometry.hpp"

namespace ftdecay::bodyspec {

// Parses the CLI body mini-language:
//   ball:d=2,r=1
//   box:d=3,h=0.5,0.5,0.5
//   pball:d=2,p=4,r=1
//   poly:file=PATH        (plain-text H-representation, one facet per line:
//                          d normal components then the offset; '#' comments)
// Construction errors (bad dimensions, unbounded/empty polytopes) propagate
// as ftdecay::Error subclasses.
geometry::BodyPtr parse_body(const std::string& spec);

}  // namespace ftdecay::bodyspec
