#include "cfie/perturb.hpp"

#include <array>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "cfie/errors.hpp"
#include "cfie/rng.hpp"

namespace cfie {

void validate_config(const PerturbConfig& cfg) {
    struct Rate {
        const char* name;
        double value;
    };
    const std::array<Rate, 6> rates = {{
        {"arity_err", cfg.arity_err},
        {"type_err", cfg.type_err},
        {"return_voidness_err", cfg.return_voidness_err},
        {"drop_fn", cfg.drop_fn},
        {"drop_cs", cfg.drop_cs},
        {"split_cs", cfg.split_cs},
    }};
    for (const Rate& r : rates) {
        if (!std::isfinite(r.value) || r.value < 0.0 || r.value > 1.0) {
            throw InputError("perturbation rate " + std::string(r.name) + " must lie in [0, 1]");
        }
    }
}

PerturbConfig parse_perturb_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("perturbation config is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) {
        throw InputError("perturbation config must be a JSON object");
    }
    PerturbConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "seed") {
            if (!value.is_number_unsigned()) {
                throw InputError("perturbation config field \"seed\" must be a non-negative integer");
            }
            cfg.seed = value.get<std::uint64_t>();
            continue;
        }
        double* slot = nullptr;
        if (key == "arity_err") slot = &cfg.arity_err;
        else if (key == "type_err") slot = &cfg.type_err;
        else if (key == "return_voidness_err") slot = &cfg.return_voidness_err;
        else if (key == "drop_fn") slot = &cfg.drop_fn;
        else if (key == "drop_cs") slot = &cfg.drop_cs;
        else if (key == "split_cs") slot = &cfg.split_cs;
        if (slot == nullptr) {
            throw InputError("perturbation config has unknown field \"" + key + "\"");
        }
        if (!value.is_number()) {
            throw InputError("perturbation config field \"" + key + "\" must be a number");
        }
        *slot = value.get<double>();
    }
    validate_config(cfg);
    return cfg;
}

namespace {

const std::array<const char*, 8> kTagPool = {"pair", "node", "buf", "ctx",
                                             "vec",  "str",  "map", "obj"};

constexpr std::array<int, 4> kWidths = {8, 16, 32, 64};
constexpr std::array<ScalarKind, 4> kScalarKinds = {ScalarKind::Int, ScalarKind::Float,
                                                    ScalarKind::Bool, ScalarKind::Enum};

TypeDescriptor random_scalar(SplitMix64& rng) {
    ScalarKind kind = kScalarKinds[rng.below(kScalarKinds.size())];
    int width = kWidths[rng.below(kWidths.size())];
    return TypeDescriptor::scalar(kind, width);
}

// Draws a plausible argument/parameter type (never plain void).
TypeDescriptor random_descriptor(SplitMix64& rng) {
    std::uint64_t roll = rng.below(100);
    if (roll < 40) return random_scalar(rng);
    if (roll < 75) {
        std::uint64_t inner = rng.below(100);
        if (inner < 20) return TypeDescriptor::pointer(TypeDescriptor::make_void());
        if (inner < 60) return TypeDescriptor::pointer(random_scalar(rng));
        if (inner < 90) {
            return TypeDescriptor::pointer(
                TypeDescriptor::aggregate(kTagPool[rng.below(kTagPool.size())]));
        }
        return TypeDescriptor::pointer(TypeDescriptor::pointer(random_scalar(rng)));
    }
    if (roll < 90) return TypeDescriptor::aggregate(kTagPool[rng.below(kTagPool.size())]);
    if (roll < 95) return TypeDescriptor::function();
    return TypeDescriptor::unknown();
}

TypeDescriptor reg_sized_int() {
    return TypeDescriptor::scalar(ScalarKind::Int, 64);
}

// Replacement guaranteed to differ from `original`. Memory-unsafe-style
// recovery noise: half the time a pointer/aggregate degrades to a plain
// register-width integer; otherwise any different random type.
TypeDescriptor replacement_for(const TypeDescriptor& original, SplitMix64& rng) {
    bool degradable = original.kind() == TypeDescriptor::Kind::Pointer ||
                      original.kind() == TypeDescriptor::Kind::Aggregate;
    if (degradable && rng.bernoulli(0.5)) return reg_sized_int();
    for (int attempt = 0; attempt < 8; ++attempt) {
        TypeDescriptor candidate = random_descriptor(rng);
        if (!type_equal_mcfi(candidate, original)) return candidate;
    }
    if (original.kind() == TypeDescriptor::Kind::Unknown) return reg_sized_int();
    return TypeDescriptor::unknown();
}

void mutate_positions(std::vector<TypeDescriptor>& list, const PerturbConfig& cfg,
                      SplitMix64& rng) {
    if (rng.bernoulli(cfg.arity_err)) {
        if (list.empty() || rng.bernoulli(0.5)) {
            list.push_back(random_descriptor(rng));
        } else {
            list.pop_back();
        }
    }
    for (auto& t : list) {
        if (rng.bernoulli(cfg.type_err)) t = replacement_for(t, rng);
    }
}

void mutate_return(TypeDescriptor& ret, const PerturbConfig& cfg, SplitMix64& rng) {
    if (!rng.bernoulli(cfg.return_voidness_err)) return;
    ret = ret.is_void() ? reg_sized_int() : TypeDescriptor::make_void();
}

} // namespace

ProgramView perturb_view(const ProgramView& truth, const PerturbConfig& cfg) {
    validate_config(cfg);
    SplitMix64 rng(cfg.seed);

    ProgramView out;
    out.label = "synthetic";

    for (const FunctionSignature& fn : truth.functions) {
        if (rng.bernoulli(cfg.drop_fn)) continue;
        FunctionSignature copy = fn;
        mutate_positions(copy.params, cfg, rng);
        mutate_return(copy.return_type, cfg, rng);
        out.functions.push_back(std::move(copy));
    }

    std::unordered_set<std::string> used_ids;
    used_ids.reserve(truth.call_sites.size() * 2);
    for (const CallSiteSignature& cs : truth.call_sites) used_ids.insert(cs.cs_id);

    std::uint64_t dup_counter = 1;
    for (const CallSiteSignature& cs : truth.call_sites) {
        if (rng.bernoulli(cfg.drop_cs)) continue;
        bool split = rng.bernoulli(cfg.split_cs);

        CallSiteSignature mutated = cs;
        mutate_positions(mutated.args, cfg, rng);
        mutate_return(mutated.expects_return, cfg, rng);
        out.call_sites.push_back(std::move(mutated));

        if (split) {
            CallSiteSignature dup = cs; // duplicate starts from the unmutated signature
            std::string dup_id;
            do {
                dup_id = cs.cs_id + "__dup" + std::to_string(dup_counter++);
            } while (used_ids.count(dup_id) != 0);
            used_ids.insert(dup_id);
            dup.cs_id = std::move(dup_id);
            mutate_positions(dup.args, cfg, rng);
            mutate_return(dup.expects_return, cfg, rng);
            out.call_sites.push_back(std::move(dup));
        }
    }

    return out;
}

} // namespace cfie
