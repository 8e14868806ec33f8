#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hmsim
{
struct CriterionResult
{
    int id{0};
    std::string title;
    bool passed{false};
    std::vector<std::string> details;
};

/*!
 * Run every acceptance criterion, printing one PASS/FAIL line per criterion
 * (plus indented detail lines) to \c log.
 */
std::vector<CriterionResult> run_acceptance_suite(std::ostream& log);

}  // namespace hmsim
