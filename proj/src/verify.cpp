#include <car/verify.hpp>

#include <set>

namespace car {

std::string CarWitness::str() const {
    return "set " + set.str() + ": pi^" + std::to_string(x) + " = " + prob_x.str() + " but pi^" +
           std::to_string(x_prime) + " = " + prob_x_prime.str();
}

CarCheck is_car(const CoarseningMechanism& mech) {
    // Sets mentioned anywhere in the table, ascending mask order.
    std::set<std::uint32_t> masks;
    for (const auto& [key, _] : mech.table()) masks.insert(key.second);

    for (std::uint32_t mask : masks) {
        Subset a(mask, mech.space());
        const auto elems = a.elements();
        for (std::size_t i = 0; i < elems.size(); ++i) {
            for (std::size_t j = i + 1; j < elems.size(); ++j) {
                Rat pi = mech.prob(elems[i], a);
                Rat pj = mech.prob(elems[j], a);
                if (pi != pj)
                    return {false, CarWitness{a, elems[i], elems[j], pi, pj}};
            }
        }
    }
    return {true, std::nullopt};
}

CarMechanism to_car(const CoarseningMechanism& mech) {
    CarCheck check = is_car(mech);
    if (!check.ok)
        throw std::domain_error("to_car: mechanism is not CAR; " + check.witness->str());

    std::map<Subset, Rat> probs;
    for (const Subset& a : mech.support())
        probs.emplace(a, mech.prob(a.elements().front(), a));
    return CarMechanism(mech.space(), probs);
}

CoarseningMechanism expand(const CarMechanism& mech) {
    std::map<CoarseningMechanism::Key, Rat> table;
    for (const auto& [mask, p] : mech.probs()) {
        Subset a(mask, mech.space());
        for (int x : a.elements()) table[{x, mask}] = p;
    }
    return CoarseningMechanism(mech.space(), table);
}

} // namespace car
