#include <cmath>

#include "doctest.h"
#include "kansdf/gradcheck.hpp"
#include "kansdf/nn.hpp"
#include "kansdf/rng.hpp"
#include "kansdf/tensor.hpp"

using namespace kansdf;

namespace {

// Independent oracle: naive triple loop, no shared code with linear_forward.
Tensor2 matmul_oracle(const Tensor2& x, const Tensor2& w, const Tensor2& b) {
    Tensor2 out(x.rows, w.rows);
    for (int r = 0; r < x.rows; ++r)
        for (int o = 0; o < w.rows; ++o) {
            double acc = b.at(0, o);
            for (int i = 0; i < x.cols; ++i) acc += x.at(r, i) * w.at(o, i);
            out.at(r, o) = acc;
        }
    return out;
}

}  // namespace

TEST_CASE("linear_forward identity and bias passthrough") {
    auto x = Tensor2::from_rows({{1.0, 2.0}});
    auto w = Tensor2::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    auto b = Tensor2::from_rows({{0.0, 0.0}});
    auto out = linear_forward(x, w, b);
    CHECK(out.at(0, 0) == doctest::Approx(1.0));
    CHECK(out.at(0, 1) == doctest::Approx(2.0));

    auto x0 = Tensor2::from_rows({{0.0, 0.0}});
    auto w2 = Tensor2::from_rows({{0.3, -0.7}, {1.2, 0.4}});
    auto b2 = Tensor2::from_rows({{3.0, -1.0}});
    auto out2 = linear_forward(x0, w2, b2);
    CHECK(out2.at(0, 0) == 3.0);
    CHECK(out2.at(0, 1) == -1.0);
}

TEST_CASE("linear_forward matches triple-loop oracle on random shapes") {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const int B = 1 + static_cast<int>(rng.next_below(16));
        const int I = 1 + static_cast<int>(rng.next_below(16));
        const int O = 1 + static_cast<int>(rng.next_below(16));
        Tensor2 x(B, I), w(O, I), b(1, O);
        fill_uniform(x, rng, -2.0, 2.0);
        fill_uniform(w, rng, -2.0, 2.0);
        fill_uniform(b, rng, -2.0, 2.0);
        auto got = linear_forward(x, w, b);
        auto want = matmul_oracle(x, w, b);
        for (size_t i = 0; i < got.size(); ++i)
            CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("linear_forward shape mismatch names both shapes") {
    Tensor2 x(2, 3), w(4, 5), b(1, 4);
    CHECK_THROWS_WITH_AS(linear_forward(x, w, b),
                         doctest::Contains("2x3"), DimensionError);
    CHECK_THROWS_WITH_AS(linear_forward(x, w, b),
                         doctest::Contains("4x5"), DimensionError);
}

TEST_CASE("activations: analytic values") {
    CHECK(silu(0.0) == 0.0);
    CHECK(silu(1.0) == doctest::Approx(0.731058578630049).epsilon(1e-12));
    CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(silu_deriv(0.0) == doctest::Approx(0.5).epsilon(1e-12));
    // overflow guards
    CHECK(std::isfinite(softplus(1e4)));
    CHECK(std::isfinite(silu(-1e4)));
    CHECK(softplus(1e4) == doctest::Approx(1e4));
    CHECK(softplus(-800.0) == doctest::Approx(0.0));
}

TEST_CASE("activation tensors stay finite for finite inputs") {
    Rng rng(7);
    Tensor2 x(8, 8);
    fill_uniform(x, rng, -500.0, 500.0);
    for (auto kind : {Activation::Silu, Activation::Softplus, Activation::Relu}) {
        auto y = activation(x, kind);
        CHECK(y.all_finite());
    }
}

TEST_CASE("linear backward: all-ones upstream gives column sums of w") {
    Rng rng(3);
    LinearLayer layer(4, 3);
    fill_uniform(layer.w.value, rng, -1.0, 1.0);
    fill_uniform(layer.b.value, rng, -1.0, 1.0);
    Tensor2 x(2, 4);
    fill_uniform(x, rng, -1.0, 1.0);
    layer.forward(x);
    Tensor2 ones = Tensor2::full(2, 3, 1.0);
    auto dx = layer.backward(ones);
    for (int r = 0; r < 2; ++r)
        for (int i = 0; i < 4; ++i) {
            double want = 0.0;
            for (int o = 0; o < 3; ++o) want += layer.w.value.at(o, i);
            CHECK(dx.at(r, i) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("backward before forward is a state error") {
    LinearLayer layer(2, 2);
    Tensor2 g(1, 2);
    CHECK_THROWS_AS(layer.backward(g), StateError);
    ActivationLayer act(Activation::Silu);
    CHECK_THROWS_AS(act.backward(g), StateError);
}

TEST_CASE("layer gradients match central finite differences") {
    Rng rng(11);
    LinearLayer layer(3, 2);
    fill_uniform(layer.w.value, rng, -1.0, 1.0);
    fill_uniform(layer.b.value, rng, -1.0, 1.0);
    DualBuffer input(Tensor2(4, 3));
    fill_uniform(input.value, rng, -1.0, 1.0);
    Tensor2 readout(4, 2);
    fill_uniform(readout, rng, -1.0, 1.0);

    auto loss = [&]() {
        auto out = layer.forward(input.value);
        double acc = 0.0;
        for (size_t i = 0; i < out.size(); ++i) acc += out.data[i] * readout.data[i];
        Tensor2 g = readout;
        add_inplace(input.grad, layer.backward(g));
        return acc;
    };
    std::vector<GradCheckEntry> params{{"w", &layer.w}, {"b", &layer.b}, {"x", &input}};
    auto report = gradcheck(loss, params);
    CHECK(report.pass);
    CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("activation gradients match finite differences") {
    Rng rng(13);
    for (auto kind : {Activation::Silu, Activation::Softplus}) {
        ActivationLayer act(kind);
        DualBuffer input(Tensor2(5, 3));
        fill_uniform(input.value, rng, -2.0, 2.0);
        Tensor2 readout(5, 3);
        fill_uniform(readout, rng, -1.0, 1.0);
        auto loss = [&]() {
            auto out = act.forward(input.value);
            double acc = 0.0;
            for (size_t i = 0; i < out.size(); ++i) acc += out.data[i] * readout.data[i];
            add_inplace(input.grad, act.backward(readout));
            return acc;
        };
        std::vector<GradCheckEntry> params{{"x", &input}};
        auto report = gradcheck(loss, params);
        CHECK(report.pass);
    }
}

TEST_CASE("adam: first bias-corrected step moves by lr * sign(g)") {
    DualBuffer w(Tensor2::full(1, 1, 1.0));
    w.grad.at(0, 0) = 2.0;
    AdamState st(w.value);
    AdamConfig cfg;
    cfg.lr = 0.1;
    adam_step(w, st, cfg);
    CHECK(w.value.at(0, 0) == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(st.step == 1);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
    DualBuffer w(Tensor2::full(2, 2, 1.5));
    AdamState st(w.value);
    AdamConfig cfg;
    for (int i = 0; i < 5; ++i) adam_step(w, st, cfg);
    for (double v : w.value.data) CHECK(v == 1.5);
}

TEST_CASE("adam: 100 steps shrink (w-3)^2 from w=0") {
    DualBuffer w(Tensor2::full(1, 1, 0.0));
    AdamState st(w.value);
    AdamConfig cfg;
    cfg.lr = 0.05;
    for (int i = 0; i < 100; ++i) {
        w.zero_grad();
        w.grad.at(0, 0) = 2.0 * (w.value.at(0, 0) - 3.0);
        adam_step(w, st, cfg);
    }
    CHECK(std::fabs(w.value.at(0, 0) - 3.0) < 0.5);
}

TEST_CASE("gradcheck rejects a deliberately corrupted gradient") {
    Rng rng(17);
    LinearLayer layer(3, 2);
    fill_uniform(layer.w.value, rng, -1.0, 1.0);
    fill_uniform(layer.b.value, rng, -1.0, 1.0);
    Tensor2 x(4, 3);
    fill_uniform(x, rng, -1.0, 1.0);
    Tensor2 readout(4, 2);
    fill_uniform(readout, rng, -1.0, 1.0);

    auto loss = [&]() {
        auto out = layer.forward(x);
        double acc = 0.0;
        for (size_t i = 0; i < out.size(); ++i) acc += out.data[i] * readout.data[i];
        layer.backward(readout);
        return acc;
    };
    std::vector<GradCheckEntry> params{{"w", &layer.w}};
    layer.zero_grad();
    loss();
    std::vector<Tensor2> analytic{layer.w.grad};
    for (double& g : analytic[0].data) g *= 1.01;
    auto report = gradcheck_compare(params, analytic, loss);
    CHECK_FALSE(report.pass);
}

TEST_CASE("rng: determinism and distribution sanity") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(5);
    double mean = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean += c.normal();
    mean /= n;
    CHECK(std::fabs(mean) < 0.05);
    Rng d(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(d.next_below(7) < 7);
    }
}
