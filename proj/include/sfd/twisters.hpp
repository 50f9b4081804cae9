#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sfd/numfield.hpp"
#include "sfd/rational.hpp"

namespace sfd {

// Lattice-periodic table of totally positive field elements indexed by the
// residue classes (c_1, ..., c_r2) with 0 <= c_j < N_j. Lookup reduces the
// trailing r2 coordinates of a lattice vector mod N_j and ignores the rest.
class Twister {
  public:
    Twister() = default;
    Twister(std::shared_ptr<const NumberField> field, std::vector<long long> N);

    const std::vector<long long>& sector_counts() const { return N_; }
    const std::shared_ptr<const NumberField>& field() const { return field_; }

    void set_entry(const std::vector<long long>& cls, FieldElement beta);
    const FieldElement& entry(const std::vector<long long>& cls) const;
    bool complete() const; // all prod N_j classes present
    size_t size() const { return table_.size(); }

    // beta(x) for x in Z^(n-1): structurally Lambda-periodic.
    const FieldElement& lookup(const IVec& x) const;

    // the class tuple of a lattice vector
    std::vector<long long> class_of(const IVec& x) const;

    const std::map<std::vector<long long>, FieldElement>& table() const { return table_; }

  private:
    std::shared_ptr<const NumberField> field_;
    std::vector<long long> N_;
    std::map<std::vector<long long>, FieldElement> table_;
};

struct TwisterWindowCheck {
    std::vector<long long> cls;
    bool totally_positive = false;
    // per complex place: |deviation| upper bound, half-width, relative slack
    std::vector<double> deviation;
    std::vector<double> halfwidth;
    std::vector<double> slack; // 1 - |dev|/halfwidth (lower bound)
    bool ok = false;
};

struct TwisterReport {
    bool complete = false;
    bool all_ok = false;
    double min_slack = 1.0;
    std::vector<TwisterWindowCheck> entries;
};

// Certified per-entry checks: total positivity and the argument windows
// |arg(beta^(r1+j)) - 2 pi c_j / N_j| < pi/2 - pi/N_j (mod 2 pi).
// Throws PrecisionExhausted on an undecidable window.
TwisterReport validate_twister(const NumberField& field, const Twister& tw);

// Builds a twister by solving for power-basis coordinates approximating
// (1,...,1, e^(2 pi i c_1/N_1), ...), rounding to bounded denominators, and
// validating with relative slack >= margin. Doubles denom_bound on failure
// up to a cap; throws TwisterSearchFailed if the cap is reached.
Twister construct_twister(std::shared_ptr<const NumberField> field,
                          const std::vector<long long>& N, double margin = 0.25,
                          long denom_bound = 16);

} // namespace sfd
