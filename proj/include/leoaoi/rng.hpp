#pragma once

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "leoaoi/common.hpp"

namespace leoaoi {

inline double uniform01(Rng& rng) {
    boost::random::uniform_01<double> dist;
    return dist(rng);
}

inline double standard_normal(Rng& rng) {
    boost::random::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

inline double gamma_draw(Rng& rng, double shape, double scale) {
    boost::random::gamma_distribution<double> dist(shape, scale);
    return dist(rng);
}

/// Seeds a stream from (seed, stream id); distinct ids give unrelated streams.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return Rng(hash_combine(seed, stream_id));
}

}  // namespace leoaoi
