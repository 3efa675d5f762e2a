#include <gtest/gtest.h>

#include <sstream>

#include "mpsimd/errors.hpp"
#include "mpsimd/presets.hpp"
#include "oracle.hpp"

using namespace mpsimd;

TEST(Presets, BuiltinsAreConsistent) {
    const auto p503 = find_preset("p503");
    ASSERT_TRUE(p503);
    EXPECT_EQ(p503->cfg, RadixConfig::make(64, 8));
    EXPECT_EQ(oracle::to_int(p503->p),
              oracle::pow2(250) * boost::multiprecision::pow(oracle::cpp_int(3), 159) - 1);
    const auto small = find_preset("p62207");
    ASSERT_TRUE(small);
    EXPECT_EQ(small->cfg, RadixConfig::make(4, 4));
    EXPECT_EQ(small->p.low_u64(), 62207u);
    EXPECT_FALSE(find_preset("p511"));
}

TEST(Presets, ParsesBothForms) {
    std::istringstream in(
        "# user presets\n"
        "tiny p=0xf2ff omega=4 limbs=4\n"
        "\n"
        "fr ell=8 F=0xf3 omega=4   # same prime\n"
        "big p=0x10000000000000001\n");
    const auto presets = parse_presets(in);
    ASSERT_EQ(presets.size(), 3u);
    EXPECT_EQ(presets[0].p, presets[1].p);
    EXPECT_EQ(presets[1].cfg, RadixConfig::make(4, 4));
    EXPECT_EQ(presets[2].cfg, RadixConfig::make(64, 2));
    EXPECT_EQ(format_preset(presets[0]), "tiny p=0xf2ff omega=4 limbs=4");
}

TEST(Presets, ExtraPresetsShadowBuiltins) {
    std::istringstream in("p503 p=0x65 omega=8\n");
    const auto extra = parse_presets(in);
    EXPECT_EQ(find_preset("p503", extra)->p.low_u64(), 0x65u);
}

TEST(Presets, ErrorsCarryLineNumbers) {
    const char* bad[] = {
        "ok p=0x7\nbad p=0xzz\n",
        "ok p=0x7\nbad ell=4\n",
        "ok p=0x7\nbad p=0x7 colour=red\n",
        "ok p=0x7\nbad p=0xffff omega=4 limbs=2\n",
        "ok p=0x7\nbad p=0x7 omega=x\n",
    };
    for (const char* text : bad) {
        std::istringstream in(text);
        try {
            parse_presets(in);
            FAIL() << "accepted: " << text;
        } catch (const ParseError& e) {
            EXPECT_EQ(e.position(), 2u) << text;
            EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        }
    }
}
