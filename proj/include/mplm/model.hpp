#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "mplm/dynamics.hpp"

namespace mplm {

/// Everything needed to draw a series except its length and randomness.
struct ModelSpec {
    MapParams params = MapParams::manneville_pomeau(0.8);
    std::uint64_t burn_in = kDefaultBurnIn;
    ObservableSpec observable;
};

/// MP takes s directly; the other models use gamma = 1 + 1/s.
inline ModelSpec model_for_s(MapKind kind, double s) {
    ModelSpec m;
    switch (kind) {
        case MapKind::MannevillePomeau: m.params = MapParams::manneville_pomeau(s); break;
        case MapKind::LinearByPart: m.params = MapParams::linear_by_part(gamma_from_s(s)); break;
        case MapKind::MarkovChain: m.params = MapParams::markov_chain(gamma_from_s(s)); break;
    }
    return m;
}

/// Immutable, shareable generator. Precomputes the zeta tables once so that
/// replications only pay for iteration.
class SeriesSource {
public:
    explicit SeriesSource(ModelSpec spec) : spec_(spec) {
        validate(spec_.observable);
        if (spec_.params.kind == MapKind::LinearByPart)
            lbp_ = std::make_shared<const LinearByPartMap>(spec_.params.gamma);
        if (spec_.params.kind == MapKind::MarkovChain)
            chain_ = std::make_shared<const RenewalChain>(spec_.params.gamma);
    }

    const ModelSpec& spec() const { return spec_; }

    BinarySeries generate(std::size_t n, std::uint64_t seed, StreamId stream = {}) const {
        switch (spec_.params.kind) {
            case MapKind::MannevillePomeau:
                return simulate_mp(spec_.params.s, n, seed, spec_.burn_in, spec_.observable, stream);
            case MapKind::LinearByPart:
                return simulate_lbp(*lbp_, n, seed, spec_.burn_in, spec_.observable, stream);
            case MapKind::MarkovChain:
                return simulate_markov(*chain_, n, seed, stream);
        }
        throw ValidationError("unknown model");
    }

private:
    ModelSpec spec_;
    std::shared_ptr<const LinearByPartMap> lbp_;
    std::shared_ptr<const RenewalChain> chain_;
};

}  // namespace mplm
