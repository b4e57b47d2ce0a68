#include <gtest/gtest.h>

#include "fibgap/validate.hpp"

using namespace fibgap;

namespace {

ValidationOptions small() {
    ValidationOptions o;
    o.cheb_sandwich_samples = 500;
    o.cheb_closed_form_samples = 200;
    o.oracle_omegas = 10;
    o.soundness_target = 300;
    o.dispersion_samples = 50;
    o.transmission_samples = 20;
    return o;
}

} // namespace

TEST(Validate, SuitesPassAtReducedScale) {
    for (const auto& name : validation_suites()) {
        if (name == "all") continue;
        const ValidationReport r = run_validation(name, small());
        EXPECT_TRUE(r.passed()) << name << ": " << to_json(r).dump(2);
        for (const auto& c : r.checks) EXPECT_GT(c.count, 0) << name << "/" << c.name;
    }
}

TEST(Validate, SameSeedSameReport) {
    const auto a = to_json(run_validation("soundness", small())).dump();
    const auto b = to_json(run_validation("soundness", small())).dump();
    EXPECT_EQ(a, b);
}

TEST(Validate, UnknownSuite) { EXPECT_THROW(run_validation("nope", small()), ConfigError); }

TEST(Validate, CheckRecordsFirstFailure) {
    ValidationCheck c("x");
    c.record(true, 0.5);
    c.record(false, 2.0, "first");
    c.record(false, 1.0, "second");
    EXPECT_FALSE(c.passed);
    EXPECT_EQ(c.count, 3);
    EXPECT_EQ(c.failures, 2);
    EXPECT_EQ(c.max_error, 2.0);
    EXPECT_EQ(c.detail, "first");
}
