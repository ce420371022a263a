#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace advexplain {

// Synthetic NSL-KDD-format traffic generator. Produces comma-separated
// records (41 features, attack name, difficulty) whose class-conditional
// feature distributions mimic the benchmark's qualitative structure:
// flood-style DOS records with zero duration and high connection counts,
// scan-style probe records with high service diversity, and a small
// population of DOS-looking normal connections that classifiers tend to
// get wrong. Deterministic given the seed.
struct SynthOptions {
    std::size_t n_records = 10000;
    std::uint64_t seed = 1;
    // Emit a sprinkling of R2L/U2R records, which the pipeline drops.
    bool include_out_of_scope = true;
};

void write_synthetic_nslkdd(std::ostream& out, const SynthOptions& options);
void write_synthetic_nslkdd_file(const std::filesystem::path& path,
                                 const SynthOptions& options);

}  // namespace advexplain
