#ifndef CFIE_PERTURB_HPP
#define CFIE_PERTURB_HPP

#include <cstdint>
#include <string>

#include "cfie/view.hpp"

namespace cfie {

// Error-injection rates, each a probability in [0, 1].
struct PerturbConfig {
    std::uint64_t seed = 0;
    double arity_err = 0.0;            // add or remove one trailing position
    double type_err = 0.0;             // replace a position with a different type
    double return_voidness_err = 0.0;  // flip void <-> i64 return
    double drop_fn = 0.0;              // omit a function entirely
    double drop_cs = 0.0;              // omit a call-site entirely
    double split_cs = 0.0;             // emit an extra copy of a call-site
};

// Throws InputError when a rate is outside [0, 1] or not finite.
void validate_config(const PerturbConfig& cfg);

// Parses a JSON object {"seed": ..., "arity_err": ..., ...}. All fields
// are optional; unknown fields are rejected.
PerturbConfig parse_perturb_config(const std::string& text);

// Derives a synthetic recovered view from a ground-truth view by walking
// entities in order and drawing from one SplitMix64 stream seeded with
// cfg.seed: functions first (drop, arity, per-position type, return), then
// call-sites (drop, split, then the same mutation sequence on the original
// and, when split, on the duplicate). Same input, config, and seed always
// produce the identical view on every platform.
ProgramView perturb_view(const ProgramView& truth, const PerturbConfig& cfg);

} // namespace cfie

#endif
