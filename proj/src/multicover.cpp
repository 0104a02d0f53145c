#include <car/multicover.hpp>

#include <car/polytope.hpp>

namespace car {

UniformMulticover::UniformMulticover(SampleSpace space, const std::map<Subset, BigInt>& multiplicities)
    : space_(space), height_(0) {
    for (const auto& [a, n] : multiplicities) {
        if (a.space_size() != space_.size())
            throw std::invalid_argument("UniformMulticover: subset from a different sample space");
        if (n <= 0)
            throw std::invalid_argument("UniformMulticover: multiplicity for " + a.str() +
                                        " must be positive, got " + n.str());
        mult_[a.mask()] = n;
    }
    if (mult_.empty()) throw std::invalid_argument("UniformMulticover: no sets");

    for (int x = 1; x <= space_.size(); ++x) {
        BigInt count = 0;
        for (const auto& [mask, n] : mult_)
            if ((mask >> (x - 1)) & 1u) count += n;
        if (x == 1) {
            height_ = count;
        } else if (count != height_) {
            throw std::invalid_argument("UniformMulticover: element 1 lies in " + height_.str() +
                                        " sets but element " + std::to_string(x) + " lies in " +
                                        count.str());
        }
    }
    if (height_ == 0) throw std::invalid_argument("UniformMulticover: sets do not cover E");

    // Canonical representative: divide out any common factor.
    BigInt g = height_;
    for (const auto& [mask, n] : mult_) g = big_gcd(g, n);
    if (g > 1) {
        height_ /= g;
        for (auto& [mask, n] : mult_) n /= g;
    }
}

BigInt UniformMulticover::multiplicity(const Subset& a) const {
    auto it = mult_.find(a.mask());
    return it == mult_.end() ? BigInt(0) : it->second;
}

Cover UniformMulticover::support() const {
    std::vector<Subset> sets;
    sets.reserve(mult_.size());
    for (const auto& [mask, _] : mult_) sets.emplace_back(mask, space_);
    return Cover(space_, std::move(sets));
}

BigInt UniformMulticover::total_multiplicity() const {
    BigInt total = 0;
    for (const auto& [_, n] : mult_) total += n;
    return total;
}

std::string UniformMulticover::str() const {
    std::string out = "k=" + height_.str() + ":";
    for (const auto& [mask, n] : mult_)
        out += " " + Subset(mask, space_).str() + "x" + n.str();
    return out;
}

CarMechanism from_multicover(const UniformMulticover& mc) {
    std::map<std::uint32_t, Rat> probs;
    for (const auto& [mask, n] : mc.multiplicities())
        probs[mask] = Rat(n, mc.height());
    return CarMechanism(mc.space(), probs);
}

UniformMulticover to_multicover(const CarMechanism& mech) {
    BigInt k = 1;
    for (const auto& [mask, p] : mech.probs()) k = big_lcm(k, p.den());
    std::map<Subset, BigInt> mult;
    for (const auto& [mask, p] : mech.probs()) {
        // k is a multiple of every denominator, so k * pi_A is integral.
        mult.emplace(Subset(mask, mech.space()), p.num() * (k / p.den()));
    }
    return UniformMulticover(mech.space(), mult);
}

BigInt height(const CarMechanism& mech) { return to_multicover(mech).height(); }

bool is_extreme_multicover(const UniformMulticover& mc) { return is_extreme(from_multicover(mc)); }

std::optional<UniformMulticover> sub_multicover_search(const UniformMulticover& mc) {
    if (mc.total_multiplicity() > kSubMulticoverSearchCap)
        throw std::domain_error("sub_multicover_search: total multiplicity " +
                                mc.total_multiplicity().str() + " exceeds cap " +
                                std::to_string(kSubMulticoverSearchCap));

    const int n = mc.space().size();
    std::vector<std::uint32_t> masks;
    std::vector<long> caps;
    for (const auto& [mask, mult] : mc.multiplicities()) {
        masks.push_back(mask);
        caps.push_back(mult.convert_to<long>());
    }
    const std::size_t s = masks.size();

    std::vector<long> chosen(s, 0);
    std::vector<long> counts(n, 0);    // per element, from the sets fixed so far
    std::vector<long> remaining(n, 0); // per element, max still addable by later sets
    for (std::size_t i = 0; i < s; ++i)
        for (int x = 0; x < n; ++x)
            if ((masks[i] >> x) & 1u) remaining[x] += caps[i];

    // Depth-first over sub-multiplicity vectors, sets in canonical order,
    // multiplicities high to low, pruning branches where some element can no
    // longer catch up with the current maximum count.
    std::optional<UniformMulticover> found;
    auto dfs = [&](auto&& self, std::size_t idx) -> bool {
        long max_count = counts[0], min_reach = counts[0] + remaining[0];
        for (int x = 1; x < n; ++x) {
            max_count = std::max(max_count, counts[x]);
            min_reach = std::min(min_reach, counts[x] + remaining[x]);
        }
        if (max_count > min_reach) return false;

        if (idx == s) {
            for (int x = 1; x < n; ++x)
                if (counts[x] != counts[0]) return false;
            if (counts[0] == 0) return false;
            bool whole = true;
            for (std::size_t i = 0; i < s; ++i)
                if (chosen[i] != caps[i]) {
                    whole = false;
                    break;
                }
            if (whole) return false;
            std::map<Subset, BigInt> mult;
            for (std::size_t i = 0; i < s; ++i)
                if (chosen[i] > 0) mult.emplace(Subset(masks[i], mc.space()), BigInt(chosen[i]));
            found = UniformMulticover(mc.space(), mult);
            return true;
        }

        for (int x = 0; x < n; ++x)
            if ((masks[idx] >> x) & 1u) {
                remaining[x] -= caps[idx];
                counts[x] += caps[idx];
            }
        for (long take = caps[idx]; take >= 0; --take) {
            chosen[idx] = take;
            if (take < caps[idx])
                for (int x = 0; x < n; ++x)
                    if ((masks[idx] >> x) & 1u) counts[x] -= 1;
            if (self(self, idx + 1)) return true;
        }
        chosen[idx] = 0;
        for (int x = 0; x < n; ++x)
            if ((masks[idx] >> x) & 1u) remaining[x] += caps[idx];
        return false;
    };
    dfs(dfs, 0);
    return found;
}

} // namespace car
