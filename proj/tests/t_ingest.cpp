#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "traj/csv.hpp"
#include "traj/errors.hpp"
#include "traj/ingest.hpp"

using namespace traj;
using testutil::TempDir;

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

FacultyRecord basic_faculty(std::string id = "F1", int hire = 2000) {
    FacultyRecord f;
    f.faculty_id = std::move(id);
    f.hire_year = hire;
    f.doctoral_rank = 5.0;
    f.employer_rank = 12.0;
    f.is_private = true;
    f.gender = Gender::Female;
    f.had_postdoc = true;
    f.source = Source::Cv;
    return f;
}

PublicationRecord basic_pub(std::string pid, std::string fid, int year) {
    PublicationRecord p;
    p.pub_id = std::move(pid);
    p.faculty_id = std::move(fid);
    p.year = year;
    p.venue = "V001";
    p.authors = {"Doe, J.", "Roe, R."};
    p.focal_index = 0;
    return p;
}

}  // namespace

TEST_CASE("csv field splitting handles quoting rules") {
    CHECK(csv::split_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(csv::split_line("a,\"b,c\",d") == std::vector<std::string>{"a", "b,c", "d"});
    CHECK(csv::split_line("\"he said \"\"hi\"\"\",x") ==
          std::vector<std::string>{"he said \"hi\"", "x"});
    CHECK(csv::split_line("") == std::vector<std::string>{""});
    CHECK(csv::split_line("a,,c") == std::vector<std::string>{"a", "", "c"});
    CHECK_THROWS_AS(csv::split_line("\"unterminated"), ParseError);
}

TEST_CASE("csv escaping round-trips through split") {
    std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "", "  spaced  "};
    auto joined = csv::join(fields);
    CHECK(csv::split_line(joined) == fields);
}

TEST_CASE("numeric formatting is shortest round-trip") {
    CHECK(csv::format_double(0.1) == "0.1");
    CHECK(csv::format_double(2.0) == "2");
    CHECK(csv::format_double(-3.25) == "-3.25");
    CHECK(csv::format_int(-42) == "-42");
    for (double v : {0.7413011, 1.0 / 3.0, 123456.789, 1e-9, -2.5e17}) {
        CHECK(std::stod(csv::format_double(v)) == v);
    }
}

TEST_CASE("table lookup by column name") {
    csv::Table t;
    t.header = {"a", "b"};
    CHECK(t.column("a") == 0);
    CHECK(t.column("b") == 1);
    CHECK(t.column("z") == -1);
}

TEST_CASE("csv file io with header") {
    TempDir dir("csvio");
    csv::Table t;
    t.header = {"id", "note"};
    t.rows = {{"1", "plain"}, {"2", "a,b"}};
    csv::write_file(dir.file("t.csv"), t);
    auto back = csv::read_file(dir.file("t.csv"));
    CHECK(back.header == t.header);
    CHECK(back.rows == t.rows);
    CHECK_THROWS_AS(csv::read_file(dir.file("missing.csv")), ParseError);
}

TEST_CASE("faculty jsonl round trip") {
    TempDir dir("facjson");
    std::vector<FacultyRecord> fac{basic_faculty("F1"), basic_faculty("F2", 1995)};
    fac[1].gender = Gender::Male;
    fac[1].source = Source::Database;
    fac[1].is_private = false;
    save_faculty(dir.file("f.jsonl"), fac);
    auto back = load_faculty(dir.file("f.jsonl"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].faculty_id == "F1");
    CHECK(back[0].hire_year == 2000);
    CHECK(back[0].doctoral_rank == 5.0);
    CHECK(back[0].employer_rank == 12.0);
    CHECK(back[0].is_private);
    CHECK(back[0].gender == Gender::Female);
    CHECK(back[0].had_postdoc);
    CHECK(back[0].source == Source::Cv);
    CHECK(back[1].gender == Gender::Male);
    CHECK(back[1].source == Source::Database);
}

TEST_CASE("publication jsonl round trip") {
    TempDir dir("pubjson");
    std::vector<PublicationRecord> pubs{basic_pub("P1", "F1", 2003)};
    pubs[0].focal_index = 1;
    save_publications(dir.file("p.jsonl"), pubs);
    auto back = load_publications(dir.file("p.jsonl"));
    REQUIRE(back.size() == 1);
    CHECK(back[0].pub_id == "P1");
    CHECK(back[0].faculty_id == "F1");
    CHECK(back[0].year == 2003);
    CHECK(back[0].venue == "V001");
    CHECK(back[0].authors == std::vector<std::string>{"Doe, J.", "Roe, R."});
    CHECK(back[0].focal_index == 1);
}

TEST_CASE("csv ingestion splits author lists on pipes") {
    TempDir dir("csvload");
    write_text(dir.file("f.csv"),
               "faculty_id,hire_year,doctoral_rank,employer_rank,is_private,gender\n"
               "F1,2001,3,8,false,M\n");
    write_text(dir.file("p.csv"),
               "pub_id,faculty_id,year,venue,authors,focal_index\n"
               "P1,F1,2004,V002,\"Adams, B.|Baker, C.\",1\n");
    auto corpus = load_corpus(dir.file("f.csv"), dir.file("p.csv"));
    REQUIRE(corpus.faculty.size() == 1);
    CHECK(corpus.faculty[0].gender == Gender::Male);
    CHECK(corpus.faculty[0].had_postdoc == false);
    CHECK(corpus.faculty[0].source == Source::Database);
    REQUIRE(corpus.publications.size() == 1);
    CHECK(corpus.publications[0].authors ==
          std::vector<std::string>{"Adams, B.", "Baker, C."});
    CHECK(corpus.publications[0].focal_index == 1);
}

TEST_CASE("ingestion rejects malformed inputs") {
    TempDir dir("bad");

    SUBCASE("duplicate faculty id") {
        save_faculty(dir.file("f.jsonl"), {basic_faculty("F1"), basic_faculty("F1")});
        save_publications(dir.file("p.jsonl"), {});
        CHECK_THROWS_AS(load_corpus(dir.file("f.jsonl"), dir.file("p.jsonl")), ParseError);
    }
    SUBCASE("duplicate pub id") {
        save_faculty(dir.file("f.jsonl"), {basic_faculty("F1")});
        save_publications(dir.file("p.jsonl"),
                          {basic_pub("P1", "F1", 2001), basic_pub("P1", "F1", 2002)});
        CHECK_THROWS_AS(load_corpus(dir.file("f.jsonl"), dir.file("p.jsonl")), ParseError);
    }
    SUBCASE("publication referencing unknown faculty") {
        save_faculty(dir.file("f.jsonl"), {basic_faculty("F1")});
        save_publications(dir.file("p.jsonl"), {basic_pub("P1", "F9", 2001)});
        CHECK_THROWS_AS(load_corpus(dir.file("f.jsonl"), dir.file("p.jsonl")), ParseError);
    }
    SUBCASE("focal index outside author list") {
        write_text(dir.file("p.jsonl"),
                   R"({"pub_id":"P1","faculty_id":"F1","year":2001,"venue":"V","authors":["A, B."],"focal_index":3})"
                   "\n");
        CHECK_THROWS_AS(load_publications(dir.file("p.jsonl")), ParseError);
    }
    SUBCASE("rank below one") {
        write_text(dir.file("f.jsonl"),
                   R"({"faculty_id":"F1","hire_year":2000,"doctoral_rank":0,"employer_rank":5,"is_private":false})"
                   "\n");
        CHECK_THROWS_AS(load_faculty(dir.file("f.jsonl")), ParseError);
    }
    SUBCASE("empty author name") {
        write_text(dir.file("p.jsonl"),
                   R"({"pub_id":"P1","faculty_id":"F1","year":2001,"venue":"V","authors":[""],"focal_index":0})"
                   "\n");
        CHECK_THROWS_AS(load_publications(dir.file("p.jsonl")), ParseError);
    }
    SUBCASE("broken json line names the location") {
        write_text(dir.file("f.jsonl"), "{not json\n");
        try {
            load_faculty(dir.file("f.jsonl"));
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(":1:") != std::string::npos);
        }
    }
    SUBCASE("missing csv column") {
        write_text(dir.file("f.csv"), "faculty_id,hire_year\nF1,2000\n");
        CHECK_THROWS_AS(load_faculty(dir.file("f.csv")), ParseError);
    }
    SUBCASE("missing file") { CHECK_THROWS_AS(load_faculty(dir.file("nope.jsonl")), ParseError); }
}

TEST_CASE("career series bucketing") {
    FacultyRecord f = basic_faculty("F1", 2000);
    std::vector<PublicationRecord> pubs{
        basic_pub("P1", "F1", 1999), basic_pub("P2", "F1", 2000), basic_pub("P3", "F1", 2000),
        basic_pub("P4", "F1", 2003), basic_pub("P5", "F1", 2013),
    };

    SUBCASE("pre-hire work folds into year zero when kept") {
        auto s = build_series(f, pubs, true, 2011);
        CHECK(s.t0 == 2000);
        REQUIRE(s.career_length() == 14);
        CHECK(s.counts[0] == 3.0);
        CHECK(s.counts[3] == 1.0);
        CHECK(s.counts[13] == 1.0);
        double total = 0;
        for (double c : s.counts) total += c;
        CHECK(total == 5.0);
    }
    SUBCASE("pre-hire work is dropped otherwise") {
        auto s = build_series(f, pubs, false, 2011);
        CHECK(s.counts[0] == 2.0);
        double total = 0;
        for (double c : s.counts) total += c;
        CHECK(total == 4.0);
    }
    SUBCASE("order of publications does not matter") {
        auto base = build_series(f, pubs, true, 2011);
        auto shuffled = pubs;
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(build_series(f, shuffled, true, 2011).counts == base.counts);
    }
    SUBCASE("quiet careers still span through the census year") {
        auto s = build_series(basic_faculty("F2", 2005), {}, true, 2011);
        CHECK(s.career_length() == 7);
        for (double c : s.counts) CHECK(c == 0.0);
    }
    SUBCASE("foreign publications are rejected") {
        CHECK_THROWS_AS(build_series(basic_faculty("F2"), pubs, true, 2011),
                        std::invalid_argument);
    }
}

TEST_CASE("fixed-span bucketing clamps both tails") {
    FacultyRecord f = basic_faculty("F1", 2000);
    std::vector<PublicationRecord> pubs{
        basic_pub("P1", "F1", 1997), basic_pub("P2", "F1", 2002), basic_pub("P3", "F1", 2030),
    };
    auto s = build_series_fixed(f, pubs, 5);
    REQUIRE(s.career_length() == 5);
    CHECK(s.counts[0] == 1.0);
    CHECK(s.counts[2] == 1.0);
    CHECK(s.counts[4] == 1.0);
    CHECK_THROWS_AS(build_series_fixed(f, pubs, 0), std::invalid_argument);
}

TEST_CASE("fit eligibility window") {
    auto active = [](int length, int nonzero) {
        std::vector<double> c(static_cast<std::size_t>(length), 0.0);
        for (int i = 0; i < nonzero; ++i) c[static_cast<std::size_t>(i)] = 1.0;
        return testutil::make_series(c);
    };
    CHECK(eligible_for_fit(active(12, 5)));
    CHECK(eligible_for_fit(active(10, 3)));
    CHECK(eligible_for_fit(active(25, 3)));
    CHECK_FALSE(eligible_for_fit(active(12, 2)));
    CHECK_FALSE(eligible_for_fit(active(9, 9)));
    CHECK_FALSE(eligible_for_fit(active(26, 20)));
    CHECK(eligible_for_fit(active(8, 4), 5, 30, 4));
}

TEST_CASE("grouping preserves order within sorted keys") {
    std::vector<PublicationRecord> pubs{
        basic_pub("P1", "F2", 2001), basic_pub("P2", "F1", 2002), basic_pub("P3", "F2", 2003),
    };
    auto groups = group_by_faculty(pubs);
    REQUIRE(groups.size() == 2);
    auto it = groups.begin();
    CHECK(it->first == "F1");
    CHECK(it->second == std::vector<std::size_t>{1});
    ++it;
    CHECK(it->first == "F2");
    CHECK(it->second == std::vector<std::size_t>{0, 2});
}
