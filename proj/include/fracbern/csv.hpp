#ifndef FRACBERN_CSV_HPP
#define FRACBERN_CSV_HPP

#include <string>
#include <vector>

namespace fracbern {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// Inverse of format_double; throws ConfigError on malformed numbers.
double parse_double(const std::string& text);

// Writes rows of doubles under a comma-separated header. Deterministic: no
// timestamps, shortest round-trip number formatting.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace fracbern

#endif // FRACBERN_CSV_HPP
