#pragma once

#include <string>

#include "core/model.hpp"

namespace capcheck {

// Parses ADL source into a canonicalized model. Throws ParseError at the
// first offending token; never returns a partial model.
ArchitectureModel parse_adl(const std::string& text,
                            const std::string& filename = "<input>");

// Canonical text form: header comment, blocks sorted by (kind rank, id),
// members sorted. parse_adl(serialize_adl(m)) is structurally equal to a
// canonicalized m.
std::string serialize_adl(const ArchitectureModel& model);

}  // namespace capcheck
