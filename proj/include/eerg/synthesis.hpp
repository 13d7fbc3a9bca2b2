#pragma once

// Synthetic-campaign generator: a known registry, controlled
// co-occurrences, injected recognition deficits, and the
// expected-findings manifest the tests use as an oracle.

#include "eerg/campaign.hpp"
#include "eerg/deficits.hpp"

#include <filesystem>
#include <random>

namespace eerg {

// Deterministic generator: mt19937_64 (seeded), bounded integers by
// modulo, unit doubles from the top 53 bits. The mapping is part of the
// file-format contract so campaigns are reproducible bit-for-bit.
class SynthRng {
public:
    explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next() % n);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

struct RegistryEntitySpec {
    std::string label;
    GranularityOrder order = GranularityOrder::Instance;
    std::vector<std::string> parents;  // labels one order above, declared earlier
};

struct InjectedDeficit {
    DeficitType type = DeficitType::ForegroundBackground;
    // Chain suffix from the deficit's locus order down to the terminal;
    // a ground-truth object is hit when its chain ends with this suffix.
    std::vector<std::string> trigger;
    ResultClass failure_class = ResultClass::R1;  // R1 | R2 | R3
    double rate = 1.0;
    // Class used for R1 swaps and R3 phantoms; defaulted when empty.
    std::string misclass_label;
};

struct SynthSpec {
    std::string campaign_id = "synthetic";
    std::uint64_t seed = 0;
    std::vector<RegistryEntitySpec> registry;
    std::size_t runs = 1;
    std::size_t frames_per_run = 1;
    std::size_t objects_per_frame_min = 1;
    std::size_t objects_per_frame_max = 1;
    std::vector<InjectedDeficit> injected;
};

struct ExpectedFinding {
    FindingKind kind = FindingKind::Implicit;
    DeficitType type = DeficitType::ForegroundBackground;
    GranularityOrder locus = GranularityOrder::Scene;
    std::uint64_t support = 0;  // relations corrupted by the injection

    auto operator<=>(const ExpectedFinding&) const = default;
};

struct SynthResult {
    Campaign campaign;
    std::vector<ExpectedFinding> expected;
};

// Deterministic under spec.seed. Ground truth is sampled from the
// registry; predictions start perfect and are perturbed per injected
// deficit (R1 class swap, R2 prediction removed, R3 phantom added).
// Boxes live on a 1000x1000 canvas, non-overlapping per frame by
// rejection sampling (1000 attempts cap). Throws SpecError on
// unsatisfiable specs.
SynthResult generate(const SynthSpec& spec);

// Canned single-deficit campaign spec for one deficit type: a minimal
// registry in which the injection provokes exactly that finding.
SynthSpec demo_spec(DeficitType type, std::uint64_t seed = 1);

// Minimal registry of city scenes with no injections; handy for
// perfect-detector baselines and randomized property tests.
SynthSpec baseline_spec(std::uint64_t seed, std::size_t runs,
                        std::size_t frames_per_run,
                        std::size_t objects_per_frame_max);

// Hand-encoded campaign reproducing the two worked identifications:
// pattern-association failures around a zone-sign road marking plus a
// phantom "Car" detection (urban run), and a bidirectional drive lane
// recognized differently in downtown and rural scenes (rural run).
Campaign reference_campaign();

// SynthSpec JSON file (docs/format.md).
SynthSpec load_synth_spec(const std::filesystem::path& path);
SynthSpec parse_synth_spec(const std::string& text);
std::string serialize_synth_spec(const SynthSpec& spec);

// Expected-findings manifest, line-delimited like campaign files.
struct ManifestData {
    std::string campaign_id;
    CampaignStats stats;
    std::vector<ExpectedFinding> findings;
};

std::string serialize_manifest(const SynthResult& result,
                               const std::string& campaign_id);
ManifestData parse_manifest(const std::string& text);
ManifestData load_manifest(const std::filesystem::path& path);

}  // namespace eerg
