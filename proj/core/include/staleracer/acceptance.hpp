#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace staleracer {

// One end-to-end check of the library against a quantitative target. All
// tolerances and seeds are fixed inside run_acceptance so the suite is
// deterministic and auditable.
//
// `measured` is the criterion's headline worst-case statistic and the check
// requires measured <= expected + tolerance (strict where the criterion
// demands strictness); compound criteria fold their sub-checks into that
// worst case and spell the pieces out in `details`.
struct CriterionResult {
    int id;
    std::string name;
    double measured;
    double expected;
    double tolerance;
    bool pass;
    double seconds;        // wallclock the check took
    double limit_seconds;  // budget the check must fit in; 0 = none
    std::string details;   // measured-vs-required summary
};

std::vector<CriterionResult> run_acceptance();

// One line per criterion plus a summary; returns true when everything passed.
bool report_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

// columns: id,name,measured,expected,tolerance,pass,seconds,limit_seconds
void write_acceptance_csv(const std::vector<CriterionResult>& results, std::ostream& out);

}  // namespace staleracer
