#pragma once

// Rational closed forms on the expected two-island environment. Templated
// on the scalar so tests can evaluate them in extended precision.

namespace aggnet::formulas {

/// Consensus without an aggregator under p(0) = (1, 0).
template <class S>
S no_ai_consensus(S h, S pi) {
    return (h * pi * pi + pi) / (h * pi * pi + h + 2 * pi);
}

/// pi / (pi + 1): the benchmark under p(0) = (1, 0).
template <class S>
S benchmark(S pi) {
    return pi / (pi + 1);
}

/// Consensus with a global aggregator, general (beta1, beta2).
template <class S>
S p_star_star(S rho, S a, S b1, S b2, S h, S pi) {
    const S r = 1 - rho;
    const S d = b1 - b2;
    const S h2p = h * h * pi;
    const S hp2 = h * pi * pi;
    const S num = (a * b1 * b2 + r * a * b2) * h2p + (a * b1 + r * (1 + (1 - a) * d)) * hp2 +
                  a * b2 * h + (a * (b1 + b2 - b1 * b2) + r * (1 - a * b1)) * pi;
    const S den = (b1 * b2 + r * (b1 - a * d)) * h2p + (b1 + r * (1 + (1 - a) * d)) * hp2 +
                  (b2 + r * (1 - a * d)) * h + (b1 + b2 - b1 * b2 + r * (2 - b2 - a * d)) * pi;
    return num / den;
}

/// Consensus with a global aggregator, beta1 = beta2 = beta.
template <class S>
S p_star_star_equal(S rho, S a, S b, S h, S pi) {
    const S r = 1 - rho;
    const S c = b + r;
    const S h2p = h * h * pi;
    const S hp2 = h * pi * pi;
    const S num = a * b * c * h2p + (a * b + r) * hp2 + a * b * h +
                  (a * b * (2 - b) + r * (1 - a * b)) * pi;
    const S den = b * c * h2p + c * hp2 + c * h + (2 - b) * c * pi;
    return num / den;
}

/// Signed gap p** - pi/(pi+1) for equal reliance.
template <class S>
S signed_gap_equal(S rho, S a, S b, S h, S pi) {
    return p_star_star_equal(rho, a, b, h, pi) - benchmark(pi);
}

template <class S>
S q_poly(S a, S b, S h, S pi) {
    const S lead = b * (a * (pi * pi + 1) - pi * pi);
    return lead * h * h + 2 * b * pi * (2 * a - 1) * h + lead + pi * pi - 1;
}

template <class S>
S equal_beta_base(S b, S h, S pi) {
    return b * h * h * pi + h * pi * pi + h + (2 - b) * pi;
}

/// d/dh of the equal-reliance signed gap.
template <class S>
S d_signed_gap_dh(S rho, S a, S b, S h, S pi) {
    const S base = equal_beta_base(b, h, pi);
    return pi * (1 - rho) * q_poly(a, b, h, pi) / ((1 + b - rho) * base * base);
}

/// d/dbeta of the equal-reliance signed gap (both reliances moving together).
template <class S>
S d_signed_gap_dbeta(S rho, S a, S b, S h, S pi) {
    const S base = equal_beta_base(b, h, pi);
    const S c = 1 + b - rho;
    const S lead = h * pi * pi + pi - a * (h * pi * pi + 2 * pi + h);
    const S tail = (1 + 2 * b - rho) * h * h * pi + h * pi * pi + h + (1 - 2 * b + rho) * pi;
    return -(1 - rho) * lead * tail / (c * c * base * base);
}

/// d/dalpha of the equal-reliance signed gap.
template <class S>
S d_signed_gap_dalpha(S rho, S b, S h, S pi) {
    const S s = b * (1 + b - rho) * h * h * pi + b * h * pi * pi + b * h + b * (1 - b + rho) * pi;
    return s / ((1 + b - rho) * equal_beta_base(b, h, pi));
}

/// Upper and lower admissible training weights for one environment.
template <class S>
struct AlphaBoundsT {
    S lower;
    S upper;
};

template <class S>
AlphaBoundsT<S> alpha_bounds(S rho, S b1, S b2, S h, S pi) {
    const S r = 1 - rho;
    const S h2p = h * h * pi;
    const S hp2 = h * pi * pi;
    const S m1 = no_ai_consensus(h, pi);
    const S m2 = 2 * pi / (pi + 1) - m1;
    const S d1 = b1 * (b2 + r) * h2p + (b1 + r * (1 + b1 - b2)) * hp2 + (b2 + r) * h +
                 (b1 + b2 - b1 * b2 + r * (2 - b2)) * pi;
    const S d2 = r * ((b1 - b2 + 1) * hp2 + pi);
    const S d3 = r * (b1 - b2) * (h2p + hp2 + h + pi);
    const S d4 = b2 * (b1 + r) * h2p + (rho * b1 + r * b2) * hp2 + b2 * h +
                 (b2 * (1 - b1) + rho * b1) * pi;
    return {(m2 * d1 - d2) / (m2 * d3 + d4), (m1 * d1 - d2) / (m1 * d3 + d4)};
}

/// Upper bound in the beta1 -> 0 limit (free of beta2).
template <class S>
S g_bar(S rho, S h, S pi) {
    const S h2p = h * h * pi;
    const S k = rho * (h2p - pi);
    return pi * (k - (2 * h2p + h * pi * pi + h)) /
           ((h + pi) * (k - (h2p + h * pi * pi + h + pi)));
}

/// Lower bound at (beta1, beta2) = (1, 0).
template <class S>
S g_under(S rho, S h, S pi) {
    const S r = 1 - rho;
    const S h2p = h * h * pi;
    const S hp2 = h * pi * pi;
    const S m2 = 2 * pi / (pi + 1) - no_ai_consensus(h, pi);
    const S num = m2 * (r * h2p + (3 - 2 * rho) * hp2 + r * h + (3 - 2 * rho) * pi) -
                  r * (2 * hp2 + pi);
    const S den = r * (h2p + hp2 + h + pi) * m2 + rho * hp2 + rho * pi;
    return num / den;
}

template <class S>
S d_g_bar_drho(S rho, S h, S pi) {
    const S h2p = h * h * pi;
    const S den = rho * (h2p - pi) - (h2p + h * pi * pi + h + pi);
    const S hm = (h - 1) * (h + 1);
    return pi * pi * pi * hm * hm / ((h + pi) * den * den);
}

template <class S>
S d_g_under_drho(S rho, S h, S pi) {
    const S p2 = pi * pi;
    const S p3 = p2 * pi;
    const S p4 = p3 * pi;
    const S p5 = p4 * pi;
    const S p6 = p5 * pi;
    const S r = h * h * h * (2 * p5 - 3 * p4 + 6 * p3 - 3 * p2 + 2 * pi) -
                h * h * (2 * p6 + 4 * p5 - 11 * p4 + 14 * p3 - 15 * p2 + 4 * pi - 2) -
                h * (6 * p5 + 13 * p4 - 18 * p3 + 13 * p2 - 10 * pi) -
                (5 * p4 + 10 * p3 - 11 * p2);
    const S a = (h - 1) * (h * p2 - h * pi + 2 * h - p2 + 3 * pi);
    const S b = (h + pi) * (h * p2 - h * pi + 2 * h + 3 * pi - 1);
    const S den = rho * a - b;
    return -(h - 1) * r / ((h * pi + 1) * den * den);
}

/// Topic-1 consensus with local aggregators (island 1 informed).
template <class S>
S local_p1(S rho, S b11, S b12, S h, S pi) {
    const S r = 1 - rho;
    const S c = r + b11;
    const S h2p = h * h * pi;
    const S hp2 = h * pi * pi;
    const S tail = rho * b11 + b12 - b11 * b12;
    const S num = c * b12 * h2p + c * hp2 + b12 * h + (r + tail) * pi;
    const S den = c * b12 * h2p + c * hp2 + (b12 + r * (1 - b11 + b12)) * h + (2 * r + tail) * pi;
    return num / den;
}

/// Topic-2 consensus with local aggregators (island 2 informed).
template <class S>
S local_p2(S rho, S b21, S b22, S h, S pi) {
    const S r = 1 - rho;
    const S c = r + b22;
    const S h2p = h * h * pi;
    const S hp2 = h * pi * pi;
    const S tail = b21 + rho * b22 - b21 * b22;
    const S num = c * b21 * h2p + b21 * hp2 + c * h + (r + tail) * pi;
    const S den = c * b21 * h2p + (b21 + r * (1 + b21 - b22)) * hp2 + c * h + (2 * r + tail) * pi;
    return num / den;
}

}  // namespace aggnet::formulas
