#pragma once

#include <string>
#include <vector>

namespace capcheck {

// Shortest round-trip decimal form (to_chars); locale-free and byte-stable
// across runs. Infinities print as "inf"/"-inf".
std::string format_number(double value);

// Strict parse of a full token as a real; accepts "inf"/"-inf" spellings.
// Returns false if the token is not entirely a number.
bool parse_number(const std::string& token, double* out);

std::vector<std::string> split(const std::string& line, char sep);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

std::string read_file(const std::string& path);

void write_file(const std::string& path, const std::string& content);

}  // namespace capcheck
