#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gentle/quiver.hpp"
#include "gentle/words.hpp"

namespace gentle {

struct VerifyOptions {
    int budget = 4;                 // bound on total dimension
    std::optional<DimVector> dim;   // check only this dimension vector and what fits under it
    std::uint64_t seed = 0;
    int jobs = 1;
    std::size_t max_counterexamples = 5;
};

struct InvariantResult {
    std::string name;
    long checked = 0;
    std::vector<std::string> counterexamples;
    std::vector<std::string> notes;
    [[nodiscard]] bool passed() const { return counterexamples.empty(); }
};

struct VerifyReport {
    std::vector<InvariantResult> invariants;
    [[nodiscard]] bool passed() const;
};

// Oracle equivalence, hom bases, base change, h' roundtrip and injectivity, rank formula,
// identification, witnesses, order inclusion and single-band auto-resolutions.
[[nodiscard]] VerifyReport run_verify(const Quiver& q, const VerifyOptions& options);

[[nodiscard]] nlohmann::ordered_json to_json(const VerifyReport& r);
[[nodiscard]] std::string to_text(const VerifyReport& r);

}  // namespace gentle
