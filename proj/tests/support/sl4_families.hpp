#pragma once

// Normal forms of the SL(4) case list with randomly drawn parameters, each
// tagged with the branch of the trace-condition tree it must reach.

#include "generators.hpp"

#include <functional>
#include <optional>
#include <string>

namespace crev::testing {

struct Sl4Instance {
    std::vector<Content> content;
    std::string branch;
    bool reversible = false;
    // c2 as a function of c3 for the families that have a closed form.
    std::function<Complex(Complex)> c2_of_c3;
};

struct Sl4Family {
    std::string name;
    std::function<Sl4Instance(Rng&)> draw;
};

inline double modulus_off_one(Rng& rng) {
    double r = uniform(rng, 1.1, 3.0);
    return uniform(rng, 0.0, 1.0) < 0.5 ? r : 1.0 / r;
}

inline double signed_modulus(Rng& rng) { return (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0) * modulus_off_one(rng); }

// Angle at least `gap` away from every multiple of pi/2.
inline double generic_angle(Rng& rng, double gap = 0.2) {
    for (;;) {
        const double t = uniform(rng, -std::numbers::pi, std::numbers::pi);
        const double m = std::remainder(t, std::numbers::pi / 2.0);
        if (std::abs(m) >= gap) return t;
    }
}

inline double quarter_turn(Rng& rng) { return uniform_int(rng, -1, 2) * std::numbers::pi / 2.0; }

inline std::vector<Sl4Family> sl4_families() {
    using std::polar;
    const Complex I{0.0, 1.0};
    std::vector<Sl4Family> f;

    f.push_back({"case1-diagonal", [](Rng& rng) {
        for (;;) {
            const double r = uniform(rng, 1.1, 3.0), s = uniform(rng, 1.1, 3.0);
            const double t = uniform(rng, -std::numbers::pi, std::numbers::pi);
            Sl4Instance in;
            in.content = {{polar(r, t), {1}}, {polar(1 / r, t), {1}}, {polar(s, -t), {1}}, {polar(1 / s, -t), {1}}};
            in.branch = "2";
            in.reversible = true;
            if (min_separation(in.content) >= 0.15) return in;
        }
    }});
    f.push_back({"case1-unit-pair", [](Rng& rng) {
        for (;;) {
            const double r = modulus_off_one(rng);
            const double t = uniform(rng, -std::numbers::pi, std::numbers::pi);
            const double phi = uniform(rng, -std::numbers::pi, std::numbers::pi);
            Sl4Instance in;
            in.content = {{polar(r, t), {1}}, {polar(1 / r, t), {1}}, {polar(1.0, phi), {1}},
                          {polar(1.0, -(2 * t + phi)), {1}}};
            in.branch = "2";
            in.reversible = true;
            if (min_separation(in.content) >= 0.15) return in;
        }
    }});
    // Two 2-blocks at conj-inverse partners; det 1 needs theta in (pi/2)Z.
    f.push_back({"case1-jordan-pair", [](Rng& rng) {
        const double r = modulus_off_one(rng);
        const double t = quarter_turn(rng);
        Sl4Instance in;
        in.content = {{polar(r, t), {2}}, {polar(1 / r, t), {2}}};
        in.branch = "2";
        in.reversible = true;
        return in;
    }});
    // The same shape with the second block at r^-1 e^{-i theta}: not
    // c-reciprocal unless theta is a multiple of pi.
    f.push_back({"case1-jordan-pair-conjugate-argument", [](Rng& rng) {
        const double r = modulus_off_one(rng);
        const double t = generic_angle(rng);
        Sl4Instance in;
        in.content = {{polar(r, t), {2}}, {polar(1 / r, -t), {2}}};
        in.branch = "not-c-reciprocal";
        in.reversible = false;
        return in;
    }});
    f.push_back({"case1-parabolic-pair", [](Rng& rng) {
        for (;;) {
            const double r = modulus_off_one(rng);
            const double t = uniform(rng, -std::numbers::pi, std::numbers::pi);
            Sl4Instance in;
            in.content = {{polar(1.0, t), {2}}, {polar(r, -t), {1}}, {polar(1 / r, -t), {1}}};
            in.branch = "2";
            in.reversible = true;
            if (min_separation(in.content) >= 0.15) return in;
        }
    }});
    f.push_back({"case2", [](Rng& rng) {
        const double r = modulus_off_one(rng);
        const double t = quarter_turn(rng);
        Sl4Instance in;
        in.content = {{polar(r, t), {1, 1}}, {polar(1 / r, t), {1, 1}}};
        in.branch = "2";
        in.reversible = true;
        return in;
    }});
    f.push_back({"A1", [](Rng& rng) {
        const double r = signed_modulus(rng);
        Sl4Instance in;
        in.content = {{r, {2}}, {1 / r, {1, 1}}};
        in.branch = "3b-real";
        in.reversible = false;
        in.c2_of_c3 = [](Complex c3) { return c3 * c3 / 4.0 + 2.0; };
        return in;
    }});
    f.push_back({"A2", [I](Rng& rng) {
        const double r = signed_modulus(rng);
        Sl4Instance in;
        in.content = {{r * I, {2}}, {I / r, {1, 1}}};
        in.branch = "3b-imaginary";
        in.reversible = false;
        in.c2_of_c3 = [](Complex c3) { return c3 * c3 / 4.0 - 2.0; };
        return in;
    }});
    f.push_back({"A3", [](Rng& rng) {
        for (;;) {
            const double r = signed_modulus(rng);
            const double t = generic_angle(rng);
            Sl4Instance in;
            in.content = {{polar(1.0, t), {1, 1}}, {polar(r, -t), {1}}, {polar(1 / r, -t), {1}}};
            in.branch = "3a";
            in.reversible = true;
            if (min_separation(in.content) >= 0.15) return in;
        }
    }});
    f.push_back({"A3,1", [](Rng& rng) {
        const double r = modulus_off_one(rng);
        Sl4Instance in;
        in.content = {{1.0, {1, 1}}, {r, {1}}, {1 / r, {1}}};
        in.branch = "3b-real";
        in.reversible = true;
        in.c2_of_c3 = [](Complex c3) { return 2.0 * c3 - 2.0; };
        return in;
    }});
    f.push_back({"A3,-1", [](Rng& rng) {
        const double r = modulus_off_one(rng);
        Sl4Instance in;
        in.content = {{-1.0, {1, 1}}, {r, {1}}, {1 / r, {1}}};
        in.branch = "3b-real";
        in.reversible = true;
        in.c2_of_c3 = [](Complex c3) { return -2.0 * c3 - 2.0; };
        return in;
    }});
    f.push_back({"A3,i", [I](Rng& rng) {
        const double r = modulus_off_one(rng);
        Sl4Instance in;
        in.content = {{I, {1, 1}}, {r * I, {1}}, {I / r, {1}}};
        in.branch = "3b-imaginary";
        in.reversible = true;
        in.c2_of_c3 = [I](Complex c3) { return 2.0 * I * c3 + 2.0; };
        return in;
    }});
    f.push_back({"A3,-i", [I](Rng& rng) {
        const double r = modulus_off_one(rng);
        Sl4Instance in;
        in.content = {{-I, {1, 1}}, {r * I, {1}}, {I / r, {1}}};
        in.branch = "3b-imaginary";
        in.reversible = true;
        in.c2_of_c3 = [I](Complex c3) { return -2.0 * I * c3 + 2.0; };
        return in;
    }});
    return f;
}

}  // namespace crev::testing
