#include <car/types.hpp>

#include <algorithm>

namespace car {

Cover::Cover(SampleSpace space, std::vector<Subset> sets) : space_(space), sets_(std::move(sets)) {
    if (sets_.empty()) throw std::invalid_argument("Cover: no sets");
    std::sort(sets_.begin(), sets_.end());
    std::uint32_t union_mask = 0;
    for (const Subset& s : sets_) {
        if (s.space_size() != space_.size())
            throw std::invalid_argument("Cover: subset from a different sample space");
        union_mask |= s.mask();
    }
    for (std::size_t i = 1; i < sets_.size(); ++i)
        if (sets_[i - 1] == sets_[i]) throw std::invalid_argument("Cover: duplicate set " + sets_[i].str());
    if (union_mask != space_.full_mask())
        throw std::invalid_argument("Cover: sets do not cover E (union " +
                                    Subset(union_mask ? union_mask : 1u, space_).str() + ")");
}

std::vector<std::uint32_t> Cover::masks() const {
    std::vector<std::uint32_t> m;
    m.reserve(sets_.size());
    for (const Subset& s : sets_) m.push_back(s.mask());
    return m;
}

bool Cover::is_partition() const {
    std::uint32_t seen = 0;
    for (const Subset& s : sets_) {
        if (seen & s.mask()) return false;
        seen |= s.mask();
    }
    return true;
}

std::string Cover::str() const {
    std::string out;
    for (const Subset& s : sets_) {
        if (!out.empty()) out += " ";
        out += s.str();
    }
    return out;
}

CoarseningMechanism::CoarseningMechanism(SampleSpace space, const std::map<Key, Rat>& table)
    : space_(space), table_(table) {
    for (const auto& [key, p] : table_) {
        auto [x, mask] = key;
        Subset a(mask, space_); // validates the mask
        if (x < 1 || x > space_.size())
            throw std::invalid_argument("CoarseningMechanism: element " + std::to_string(x) +
                                        " outside 1.." + std::to_string(space_.size()));
        if (!a.contains(x))
            throw std::invalid_argument("CoarseningMechanism: entry for x=" + std::to_string(x) +
                                        " with set " + a.str() + " not containing x");
        if (p < Rat(0) || p > Rat(1))
            throw std::invalid_argument("CoarseningMechanism: probability " + p.str() +
                                        " outside [0,1] for x=" + std::to_string(x));
    }
    for (int x = 1; x <= space_.size(); ++x) {
        Rat sum(0);
        for (const auto& [key, p] : table_)
            if (key.first == x) sum += p;
        if (sum != Rat(1))
            throw std::invalid_argument("CoarseningMechanism: probabilities for element " +
                                        std::to_string(x) + " sum to " + sum.str() + ", expected 1");
    }
}

Rat CoarseningMechanism::prob(int x, const Subset& a) const {
    auto it = table_.find({x, a.mask()});
    return it == table_.end() ? Rat(0) : it->second;
}

std::vector<Subset> CoarseningMechanism::support() const {
    std::map<std::uint32_t, bool> pos;
    for (const auto& [key, p] : table_)
        if (p > Rat(0)) pos[key.second] = true;
    std::vector<Subset> out;
    for (const auto& [mask, _] : pos) out.emplace_back(mask, space_);
    return out;
}

CarMechanism::CarMechanism(SampleSpace space, const std::map<Subset, Rat>& probs) : space_(space) {
    std::map<std::uint32_t, Rat> by_mask;
    for (const auto& [a, p] : probs) {
        if (a.space_size() != space_.size())
            throw std::invalid_argument("CarMechanism: subset from a different sample space");
        by_mask[a.mask()] = p;
    }
    *this = CarMechanism(space, by_mask);
}

CarMechanism::CarMechanism(SampleSpace space, const std::map<std::uint32_t, Rat>& probs) : space_(space) {
    for (const auto& [mask, p] : probs) {
        Subset a(mask, space_); // validates the mask
        if (p < Rat(0))
            throw std::invalid_argument("CarMechanism: negative probability " + p.str() + " for " + a.str());
        if (p > Rat(0)) probs_[mask] = p; // zeros are never stored
    }
    for (int x = 1; x <= space_.size(); ++x) {
        Rat sum(0);
        for (const auto& [mask, p] : probs_)
            if ((mask >> (x - 1)) & 1u) sum += p;
        if (sum != Rat(1))
            throw std::invalid_argument("CarMechanism: probabilities over sets containing element " +
                                        std::to_string(x) + " sum to " + sum.str() + ", expected 1");
    }
}

Rat CarMechanism::prob(std::uint32_t mask) const {
    auto it = probs_.find(mask);
    return it == probs_.end() ? Rat(0) : it->second;
}

Cover CarMechanism::support() const {
    std::vector<Subset> sets;
    sets.reserve(probs_.size());
    for (const auto& [mask, _] : probs_) sets.emplace_back(mask, space_);
    return Cover(space_, std::move(sets));
}

std::string CarMechanism::str() const {
    std::string out;
    for (const auto& [mask, p] : probs_) {
        if (!out.empty()) out += " ";
        out += Subset(mask, space_).str() + "=" + p.str();
    }
    return out;
}

bool operator<(const CarMechanism& a, const CarMechanism& b) {
    if (a.space_.size() != b.space_.size()) return a.space_.size() < b.space_.size();
    return a.probs_ < b.probs_;
}

CarMechanism mixture(const std::vector<std::pair<Rat, CarMechanism>>& terms) {
    if (terms.empty()) throw std::invalid_argument("mixture: no terms");
    SampleSpace space = terms.front().second.space();
    Rat weight_sum(0);
    std::map<std::uint32_t, Rat> acc;
    for (const auto& [w, mech] : terms) {
        if (mech.space() != space) throw std::invalid_argument("mixture: mismatched sample spaces");
        if (w <= Rat(0)) throw std::invalid_argument("mixture: weight " + w.str() + " not positive");
        weight_sum += w;
        for (const auto& [mask, p] : mech.probs()) acc[mask] += w * p;
    }
    if (weight_sum != Rat(1))
        throw std::invalid_argument("mixture: weights sum to " + weight_sum.str() + ", expected 1");
    return CarMechanism(space, acc);
}

CarMechanism mixture(const MixtureDecomposition& d) {
    std::vector<std::pair<Rat, CarMechanism>> terms;
    terms.reserve(d.terms.size());
    for (const auto& t : d.terms) terms.emplace_back(t.weight, t.mechanism);
    return mixture(terms);
}

CarMechanism partition_mechanism(const Cover& partition) {
    if (!partition.is_partition())
        throw std::invalid_argument("partition_mechanism: cover has overlapping blocks: " + partition.str());
    std::map<Subset, Rat> probs;
    for (const Subset& block : partition.sets()) probs.emplace(block, Rat(1));
    return CarMechanism(partition.space(), probs);
}

} // namespace car
