#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "heb/losses.hpp"
#include "heb/metrics.hpp"
#include "heb/rng.hpp"

using namespace heb;

TEST_CASE("bce: closed-form values") {
    CHECK(std::abs(bce(0.5, 1.0).loss - std::log(2.0)) <= 1e-12);
    CHECK(std::abs(bce(0.5, 0.0).loss - std::log(2.0)) <= 1e-12);
    CHECK(std::abs(bce(0.9, 1.0).loss + std::log(0.9)) <= 1e-12);
    CHECK(std::abs(bce(0.1, 0.0).loss + std::log(0.9)) <= 1e-12);
    // saturated inputs stay finite thanks to the epsilon clamp
    CHECK(std::isfinite(bce(0.0, 1.0).loss));
    CHECK(std::isfinite(bce(1.0, 0.0).loss));
    CHECK(bce(0.0, 1.0).loss == doctest::Approx(-std::log(kProbEps)).epsilon(1e-9));
}

TEST_CASE("bce: gradient matches central differences") {
    const double h = 1e-5;
    for (double y : {0.0, 1.0, 0.3}) {
        for (double p = 0.01; p <= 0.99; p += 0.005) {
            double analytic = bce(p, y).gradient;
            double numeric = (bce(p + h, y).loss - bce(p - h, y).loss) / (2 * h);
            CHECK(std::abs(analytic - numeric) <=
                  1e-4 * std::max(1.0, std::abs(analytic)));
        }
    }
}

TEST_CASE("ciou: identities and worked cases") {
    BoxXYXY a{0.2, 0.2, 0.6, 0.6};
    auto same = ciou(a, a);
    CHECK(same.iou == 1.0);
    CHECK(same.ciou == 1.0);
    CHECK(same.loss == 0.0);

    // concentric squares, side ratio 2: IoU = CIoU = 0.25 (centers coincide,
    // aspect ratios equal, so both penalties vanish)
    BoxXYXY outer{0.0, 0.0, 0.4, 0.4};
    BoxXYXY inner{0.1, 0.1, 0.3, 0.3};
    auto conc = ciou(outer, inner);
    CHECK(conc.iou == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(conc.ciou == doctest::Approx(0.25).epsilon(1e-12));

    // offset boxes: center penalty strictly separates ciou from iou
    BoxXYXY b{0.3, 0.2, 0.7, 0.6};
    auto off = ciou(a, b);
    CHECK(off.ciou < off.iou);
    CHECK(off.loss == doctest::Approx(1.0 - off.ciou).epsilon(1e-12));

    // disjoint boxes still produce a usable (negative) ciou
    BoxXYXY far{0.8, 0.8, 0.9, 0.9};
    auto dj = ciou(a, far);
    CHECK(dj.iou == 0.0);
    CHECK(dj.ciou < 0.0);
    CHECK(dj.ciou > -1.0);
}

TEST_CASE("ciou: never exceeds iou on random pairs") {
    SplitMix64 rng(1);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
        auto mk = [&rng] {
            double x1 = rng.next_in(0.0, 0.8), y1 = rng.next_in(0.0, 0.8);
            return BoxXYXY{x1, y1, x1 + rng.next_in(0.01, 0.2),
                           y1 + rng.next_in(0.01, 0.2)};
        };
        auto r = ciou(mk(), mk());
        if (r.ciou > r.iou + 1e-15) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("ciou: agrees with an independent long-double evaluation") {
    SplitMix64 rng(2);
    for (int i = 0; i < 200; ++i) {
        double ax1 = rng.next_in(0.0, 0.6), ay1 = rng.next_in(0.0, 0.6);
        double bx1 = rng.next_in(0.0, 0.6), by1 = rng.next_in(0.0, 0.6);
        BoxXYXY a{ax1, ay1, ax1 + rng.next_in(0.05, 0.3), ay1 + rng.next_in(0.05, 0.3)};
        BoxXYXY b{bx1, by1, bx1 + rng.next_in(0.05, 0.3), by1 + rng.next_in(0.05, 0.3)};

        long double iw = std::min((long double)a.x2, (long double)b.x2) -
                         std::max((long double)a.x1, (long double)b.x1);
        long double ih = std::min((long double)a.y2, (long double)b.y2) -
                         std::max((long double)a.y1, (long double)b.y1);
        long double inter = (iw > 0 && ih > 0) ? iw * ih : 0.0L;
        long double uni = (long double)a.area() + (long double)b.area() - inter;
        long double iou_ref = inter / uni;
        long double acx = (a.x1 + a.x2) / 2.0L, acy = (a.y1 + a.y2) / 2.0L;
        long double bcx = (b.x1 + b.x2) / 2.0L, bcy = (b.y1 + b.y2) / 2.0L;
        long double rho2 = (acx - bcx) * (acx - bcx) + (acy - bcy) * (acy - bcy);
        long double cw = std::max((long double)a.x2, (long double)b.x2) -
                         std::min((long double)a.x1, (long double)b.x1);
        long double ch = std::max((long double)a.y2, (long double)b.y2) -
                         std::min((long double)a.y1, (long double)b.y1);
        long double c2 = cw * cw + ch * ch;
        long double pi = 3.14159265358979323846264338327950288L;
        long double d = std::atan((long double)a.width() / (long double)a.height()) -
                        std::atan((long double)b.width() / (long double)b.height());
        long double v = 4.0L / (pi * pi) * d * d;
        long double alpha = v == 0.0L ? 0.0L : v / ((1.0L - iou_ref) + v);
        long double ciou_ref = iou_ref - rho2 / c2 - alpha * v;

        auto got = ciou(a, b);
        CHECK(std::abs(got.iou - (double)iou_ref) <= 1e-12);
        CHECK(std::abs(got.ciou - (double)ciou_ref) <= 1e-9);
    }
}

TEST_CASE("dfl: bracket weights and minimizer") {
    // equal mass on the two bracketing bins of y=3.5 gives ln 2
    BinDistribution d;
    d.probs = {0, 0, 0, 0.5, 0.5, 0};
    CHECK(std::abs(dfl(d, 3.5) - std::log(2.0)) <= 1e-12);

    // integer target reduces to -ln S_y
    BinDistribution e;
    e.probs = {0.1, 0.7, 0.2};
    CHECK(std::abs(dfl(e, 1.0) + std::log(0.7)) <= 1e-12);

    // top bin target uses the full weight
    CHECK(std::abs(dfl(e, 2.0) + std::log(0.2)) <= 1e-12);

    // the bracketing distribution with the exact linear weights minimizes the
    // loss among candidates for a fractional target
    double y = 2.3;
    BinDistribution best;
    best.probs = {0, 0, 0.7, 0.3};
    double best_loss = dfl(best, y);
    SplitMix64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        BinDistribution cand;
        cand.probs.assign(4, 0.0);
        double sum = 0.0;
        for (auto& p : cand.probs) {
            p = rng.next_unit() + 1e-6;
            sum += p;
        }
        for (auto& p : cand.probs) p /= sum;
        CHECK(dfl(cand, y) >= best_loss - 1e-12);
    }

    // validation rejects unnormalized distributions and range errors
    BinDistribution bad;
    bad.probs = {0.5, 0.6};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(dfl(e, 2.5), std::out_of_range);  // beyond top bin
    CHECK_THROWS_AS(dfl(e, -0.1), std::out_of_range);
}

TEST_CASE("loss triple report: batch means") {
    LossPair pair;
    pair.pred_box = {0.2, 0.2, 0.6, 0.6};
    pair.target_box = {0.2, 0.2, 0.6, 0.6};
    pair.pred_prob = 0.5;
    pair.target_prob = 1.0;
    pair.pred_dist.probs = {0, 0.5, 0.5};
    pair.dfl_target = 1.5;
    auto r = loss_triple_report({pair, pair});
    CHECK(r.box_loss == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.cls_loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.dfl_loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(loss_triple_report({}), std::invalid_argument);
}
