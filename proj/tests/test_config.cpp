#include <gtest/gtest.h>

#include "fibgap/config.hpp"
#include "fibgap/presets.hpp"

using namespace fibgap;

TEST(Config, ParsesEachKind) {
    const SystemSpec ms = parse_system_spec(std::string(
        R"({"kind":"mass-spring","params":{"mass_A":1,"mass_B":2,"stiffness_A":200,"stiffness_B":100}})"));
    EXPECT_EQ(ms.kind(), SystemKind::MassSpring);
    EXPECT_EQ(ms.mass_spring().mass_B, 2.0);
    const SystemSpec beam = parse_system_spec(
        std::string(R"({"kind":"beam","params":{"span_A":0.025,"span_B":0.1,"radius_of_inertia":0.05,"P":1}})"));
    EXPECT_EQ(beam.beam().span_B, 0.1);
}

TEST(Config, RoundTrip) {
    for (const SystemSpec& spec : {SystemSpec(presets::fig4_mass_spring()), SystemSpec(presets::fig5_rod()),
                                   SystemSpec(presets::fig7_beam()), SystemSpec(presets::fig8_rod())}) {
        const SystemSpec back = parse_system_spec(to_json(spec));
        EXPECT_EQ(to_json(back), to_json(spec));
        EXPECT_EQ(parse_system_spec(to_json(spec).dump()).kind(), spec.kind());
    }
}

TEST(Config, RejectsBadInput) {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"params":{}})",
        R"({"kind":"rod"})",
        R"({"kind":"plate","params":{}})",
        R"({"kind":"beam","params":{"span_A":1,"span_B":1,"radius_of_inertia":1}})",
        R"({"kind":"beam","params":{"span_A":1,"span_B":1,"radius_of_inertia":1,"P":"1"}})",
        R"({"kind":"beam","params":{"span_A":1,"span_B":1,"radius_of_inertia":1,"P":1,"extra":2}})",
        R"({"kind":"beam","params":{"span_A":-1,"span_B":1,"radius_of_inertia":1,"P":1}})",
        R"({"kind":"mass-spring","params":{"mass_A":0,"mass_B":1,"stiffness_A":1,"stiffness_B":1}})",
    };
    for (const char* text : bad) EXPECT_THROW(parse_system_spec(std::string(text)), ConfigError) << text;
    EXPECT_THROW(load_system_spec("/nonexistent/fibgap.json"), ConfigError);
}
