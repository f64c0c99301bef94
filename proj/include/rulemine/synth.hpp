#ifndef RULEMINE_SYNTH_HPP
#define RULEMINE_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "rulemine/dataset.hpp"

namespace rulemine::synth {

/// separable:  two numeric attributes, class = (x1 > 0.5).
/// credit3:    6 numeric + 4 nominal applicant attributes, labelled by a
///             3-rule hidden decision list, then 5% of labels flipped.
/// fragmented: the Accept class lives in 8 disjoint values of a 16-valued
///             nominal attribute; everything else is noise.
enum class Profile { separable, credit3, fragmented };

inline constexpr std::size_t kMinRows = 50;
inline constexpr double kCredit3Noise = 0.05;

Profile profile_from_string(const std::string& name);
std::string to_string(Profile profile);

AttributeSchema schema_for(Profile profile);

/// Noise-free label of a record under the profile's hidden rules.
std::size_t ground_truth(Profile profile, const Record& record);

/// Deterministic in (profile, rows, seed). Throws ConfigError when rows < kMinRows.
RawDataset generate(Profile profile, std::size_t rows, std::uint64_t seed);

/// Header row (attributes then class), numbers in shortest round-trip form.
void write_csv(const RawDataset& data, std::ostream& out);

}  // namespace rulemine::synth

#endif
