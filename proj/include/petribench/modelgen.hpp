#pragma once
// Parameterized model families and their official scaling parameters.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "petribench/net.hpp"

namespace petribench {

// Scaling parameter: a single integer for most families, an (r, w) pair
// for RwMutex-style families. Text form is "5" or "r10w10".
struct ModelParams {
    std::uint64_t n = 0;
    std::optional<std::uint64_t> w;

    std::string text() const;
    // Parses "<int>" or "r<int>w<int>" depending on the family's shape;
    // throws net_error on malformed input or shape mismatch.
    static ModelParams parse(const std::string& family,
                             const std::string& text);

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

enum class ModelFamilyId {
    Philosophers,
    FMS,
    Kanban,
    SharedMemory,
    TokenRing,
    Peterson,
    Lamport,
    Eratosthenes,
    RwMutex,
    SimpleLbs,
};

struct ModelFamily {
    ModelFamilyId id = ModelFamilyId::Philosophers;
    std::string name;  // canonical text form of id
    std::string description;
    std::vector<ModelParams> official_parameters;
};

// The ten families, in canonical (report) order.
const std::vector<ModelFamily>& model_families();

// nullptr when the name is unknown.
const ModelFamily* find_family(const std::string& name);
const ModelFamily& family_info(ModelFamilyId id);

// Builds the net for one instance; throws net_error for unknown families
// or parameter shapes that do not fit the family.
PetriNet generate(ModelFamilyId family, const ModelParams& params);
PetriNet generate(const std::string& family, const ModelParams& params);

}  // namespace petribench
