#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "poisson.hpp"

namespace gg {

struct RadialProfile;

/// `r,theta,value` rows, radius-major, every number printed with %.17g.
void write_field_csv(std::ostream& os, const ScalarField& f);

/// Accepts rows in any order; the radii must form a log-spaced grid and the
/// angles a uniform one. IO_ERROR on malformed input.
ScalarField read_field_csv(std::istream& is);

/// `r,u,du,ddu` rows.
void write_profile_csv(std::ostream& os, const RadialProfile& p);

/// %.17g formatting used by every CSV writer.
std::string fmt_exact(double v);

}  // namespace gg
