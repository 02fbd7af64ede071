#ifndef FLOBOUND_REPORT_HPP
#define FLOBOUND_REPORT_HPP

#include <string>

#include "flobound/engine.hpp"

namespace flobound {

// Six significant digits, rounded in the given direction, printf %g style.
std::string decimal(const Rational& x, Direction dir);
std::string decimal(const Dyadic& x, Direction dir);

// "[lo, hi]" with outward decimal endpoints.
std::string decimal_interval(const Interval& i);

std::string render_report(const Script& script, const Report& report);

// 0 all goals proved, 2 some goal unproved, 3 resource limit hit.
int exit_status(const Report& report);

}  // namespace flobound

#endif
