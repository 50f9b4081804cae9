#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfd/domain.hpp"

namespace sfd {

struct VerifyOptions {
    int samples = 1000;
    std::uint64_t seed = 42;
    double tol = 1e-30;
    int bound = -1;             // -1: auto enumeration bound per sample
    int relabelings = 100;      // mu-invariance trials per cone
    int invariance_pairs = 100; // signed_count(x) == signed_count(eps x) pairs
    int lambda_samples = 10000;
    bool run_lambda = true;
    long prec = 0;              // 0: max(128, domain precision)
    int threads = 0;            // 0: hardware concurrency
};

struct VerifyReport {
    int samples_requested = 0;
    int accepted = 0;
    int resampled = 0;
    bool counts_all_one = true;
    bool stability_pass = true;
    bool lambda_pass = true;
    bool sectors_pass = true;
    bool y_nonzero_pass = true;
    bool mu_relabeling_pass = true;
    bool det_coherence_pass = true;
    bool e_invariance_pass = true;
    int mu_zero_cones = 0;
    int bound_used_max = 0;
    std::vector<long> per_sample_counts; // one entry per accepted sample
    std::vector<long long> per_cone_hits;
    std::vector<int> max_orbit_per_cone;
    LambdaReport lambda;
    std::uint64_t seed = 0;
    long precision_bits = 0;
    std::vector<std::string> failures;

    bool all_pass() const {
        return counts_all_one && stability_pass && lambda_pass && sectors_pass &&
               y_nonzero_pass && mu_relabeling_pass && det_coherence_pass && e_invariance_pass &&
               accepted == samples_requested;
    }
};

// Per-place ranges of the normalized log embedding over the closed cones;
// shared by the enumeration bound and the membership prefilter. Computing it
// costs one exact norm per generator, so reuse it across samples.
struct ConeLogBox {
    std::vector<double> lo, hi;                        // union over cones
    std::vector<std::vector<double>> cone_lo, cone_hi; // per cone; empty if mu == 0
    bool usable = false;
};
ConeLogBox cone_log_box(const SignedDomain& dom);

// Box bound B such that eps(a) x can only meet a closed cone when every
// |a_i| <= B; computed from the normalized generators' hulls with a +2
// safety margin.
int enumeration_bound(const SignedDomain& dom, const IVecI& x, long prec,
                      const ConeLogBox* box = nullptr);

// Signed orbit count over the exponent box |a_i| <= B, with the B vs B+2
// stability assertion (UnstableBound). nullopt when any membership test was
// ambiguous; per_cone_hits (optional) receives the per-cone hit counts.
std::optional<long> signed_count(const SignedDomain& dom, const MembershipEngine& eng,
                                 const IVecI& x, int B, double tol,
                                 std::vector<int>* per_cone_hits = nullptr,
                                 const ConeLogBox* box = nullptr);

// Log-uniform magnitudes in [e^-2, e^2], uniform angles; deterministic in
// (seed, index).
IVecI sample_point(const SignedDomain& dom, std::uint64_t seed, std::uint64_t index, long prec);

VerifyReport run_property_suite(const SignedDomain& dom, const VerifyOptions& opt);

} // namespace sfd
