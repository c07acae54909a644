#include "traj/authorship.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "traj/classify.hpp"
#include "traj/errors.hpp"
#include "traj/rng.hpp"

namespace traj {
namespace {

// Latin-1 Supplement and Latin Extended-A folding to ASCII base letters.
const char* fold_codepoint(unsigned cp) {
    if (cp >= 0xC0 && cp <= 0xFF) {
        switch (cp) {
            case 0xC6: case 0xE6: return "ae";
            case 0xC7: case 0xE7: return "c";
            case 0xD0: case 0xF0: return "d";
            case 0xD1: case 0xF1: return "n";
            case 0xD7: case 0xF7: return "";
            case 0xDD: case 0xFD: case 0xFF: return "y";
            case 0xDE: case 0xFE: return "th";
            case 0xDF: return "ss";
            default: break;
        }
        if (cp <= 0xC5 || (cp >= 0xE0 && cp <= 0xE5)) return "a";
        if (cp <= 0xCB || (cp >= 0xE8 && cp <= 0xEB)) return "e";
        if (cp <= 0xCF || (cp >= 0xEC && cp <= 0xEF)) return "i";
        if (cp <= 0xD6 || cp == 0xD8 || (cp >= 0xF2 && cp <= 0xF6) || cp == 0xF8) return "o";
        return "u";
    }
    if (cp >= 0x100 && cp <= 0x17F) {
        if (cp <= 0x105) return "a";
        if (cp <= 0x10D) return "c";
        if (cp <= 0x111) return "d";
        if (cp <= 0x11B) return "e";
        if (cp <= 0x123) return "g";
        if (cp <= 0x127) return "h";
        if (cp <= 0x131) return "i";
        if (cp <= 0x133) return "ij";
        if (cp <= 0x135) return "j";
        if (cp <= 0x138) return "k";
        if (cp <= 0x142) return "l";
        if (cp <= 0x14B) return "n";
        if (cp <= 0x151) return "o";
        if (cp <= 0x153) return "oe";
        if (cp <= 0x159) return "r";
        if (cp <= 0x161) return "s";
        if (cp <= 0x167) return "t";
        if (cp <= 0x173) return "u";
        if (cp <= 0x175) return "w";
        if (cp <= 0x178) return "y";
        if (cp <= 0x17E) return "z";
        return "s";
    }
    return nullptr;
}

// UTF-8 aware fold; bytes that do not form a valid sequence fall back to
// Latin-1 interpretation.
std::string fold_name(const std::string& s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        unsigned cp = c;
        std::size_t len = 1;
        if (c >= 0xC0 && c < 0xE0 && i + 1 < s.size() &&
            (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80) {
            cp = ((c & 0x1Fu) << 6) | (static_cast<unsigned char>(s[i + 1]) & 0x3Fu);
            len = 2;
        } else if (c >= 0xE0 && c < 0xF0 && i + 2 < s.size() &&
                   (static_cast<unsigned char>(s[i + 1]) & 0xC0) == 0x80 &&
                   (static_cast<unsigned char>(s[i + 2]) & 0xC0) == 0x80) {
            cp = ((c & 0x0Fu) << 12) | ((static_cast<unsigned char>(s[i + 1]) & 0x3Fu) << 6) |
                 (static_cast<unsigned char>(s[i + 2]) & 0x3Fu);
            len = 3;
        }
        if (cp < 0x80) {
            out.push_back(static_cast<char>(std::tolower(static_cast<int>(cp))));
        } else if (const char* base = fold_codepoint(cp)) {
            out += base;
        } else {
            out.append(s, i, len);
        }
        i += len;
    }
    return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && is_space(s[a])) ++a;
    while (b > a && is_space(s[b - 1])) --b;
    return s.substr(a, b - a);
}

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

int career_span(const FacultyRecord& faculty, const std::vector<PublicationRecord>& pubs,
                int census_year) {
    int last = census_year;
    for (const auto& p : pubs) last = std::max(last, p.year);
    return std::max(1, last - faculty.hire_year + 1);
}

struct RoleCounts {
    std::vector<int> total, first, last;
};

RoleCounts count_roles(const FacultyRecord& faculty, const std::vector<PublicationRecord>& pubs,
                       const std::set<std::string>& flagged_venues, int span) {
    RoleCounts rc;
    rc.total.assign(static_cast<std::size_t>(span), 0);
    rc.first.assign(static_cast<std::size_t>(span), 0);
    rc.last.assign(static_cast<std::size_t>(span), 0);
    for (const auto& p : pubs) {
        if (flagged_venues.count(p.venue)) continue;
        const int t = std::clamp(p.year - faculty.hire_year, 0, span - 1);
        const auto ti = static_cast<std::size_t>(t);
        const int m = static_cast<int>(p.authors.size());
        rc.total[ti] += 1;
        if (m == 1 || p.focal_index == 0) rc.first[ti] += 1;
        if (m >= 2 && p.focal_index == m - 1) rc.last[ti] += 1;
    }
    return rc;
}

}  // namespace

std::string surname_key(const std::string& name) {
    if (trim(name).empty()) throw ParseError("empty author name");
    std::string head = name;
    if (const auto comma = name.find(','); comma != std::string::npos) {
        head = name.substr(0, comma);
        if (trim(head).empty()) head = name;
    }
    head = trim(head);
    std::size_t start = 0;
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (is_space(head[i])) start = i + 1;
    }
    return fold_name(head.substr(start));
}

bool is_alphabetized(const std::vector<std::string>& authors) {
    if (authors.size() < 2) {
        throw std::invalid_argument("is_alphabetized: need at least two authors");
    }
    std::string prev = surname_key(authors[0]);
    for (std::size_t i = 1; i < authors.size(); ++i) {
        std::string cur = surname_key(authors[i]);
        if (cur < prev) return false;
        prev = std::move(cur);
    }
    return true;
}

double poisson_binomial_tail(const std::vector<double>& probs, int k) {
    if (k <= 0) return 1.0;
    if (k > static_cast<int>(probs.size())) return 0.0;
    std::vector<double> dist(probs.size() + 1, 0.0);
    dist[0] = 1.0;
    std::size_t upper = 0;
    for (double p : probs) {
        ++upper;
        for (std::size_t j = upper; j > 0; --j) {
            dist[j] = dist[j] * (1.0 - p) + dist[j - 1] * p;
        }
        dist[0] *= 1.0 - p;
    }
    long double tail = 0.0L;
    for (std::size_t j = dist.size(); j-- > static_cast<std::size_t>(k);) tail += dist[j];
    return std::min(1.0, static_cast<double>(tail));
}

double monte_carlo_tail(const std::vector<double>& probs, int k, long n_sims, std::uint64_t stream_key) {
    if (n_sims < 1) throw std::invalid_argument("monte_carlo_tail: need at least one simulation");
    rng::Stream stream(stream_key);
    long hits = 0;
    for (long s = 0; s < n_sims; ++s) {
        int count = 0;
        for (double p : probs) count += stream.next_bernoulli(p) ? 1 : 0;
        if (count >= k) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n_sims);
}

VenueOrderStats venue_test(const std::string& venue,
                           const std::vector<const PublicationRecord*>& multi_author_papers,
                           double alpha_level,
                           double ratio_threshold,
                           TailMode mode,
                           std::uint64_t seed,
                           long n_sims) {
    if (multi_author_papers.empty()) {
        throw std::invalid_argument("venue_test: no multi-author papers for venue '" + venue + "'");
    }
    VenueOrderStats stats;
    stats.venue = venue;
    stats.n_multi = static_cast<int>(multi_author_papers.size());

    std::vector<double> probs;
    probs.reserve(multi_author_papers.size());
    for (const PublicationRecord* p : multi_author_papers) {
        const int m = static_cast<int>(p->authors.size());
        if (m < 2) throw std::invalid_argument("venue_test: single-author paper " + p->pub_id);
        probs.push_back(m <= 20 ? 1.0 / factorial(m) : 0.0);
        if (is_alphabetized(p->authors)) stats.n_alpha += 1;
    }
    long double expected = 0.0L;
    for (double p : probs) expected += p;
    stats.expected_alpha = static_cast<double>(expected);

    const bool exact = mode == TailMode::Exact ||
                       (mode == TailMode::Auto && stats.n_multi <= 10000);
    stats.p_value = exact ? poisson_binomial_tail(probs, stats.n_alpha)
                          : monte_carlo_tail(probs, stats.n_alpha, n_sims,
                                             rng::derive(seed, venue));
    stats.flagged = stats.p_value < alpha_level &&
                    static_cast<double>(stats.n_alpha) >= ratio_threshold * stats.expected_alpha;
    return stats;
}

VenueFlagResult flag_alphabetized_venues(const std::vector<PublicationRecord>& pubs,
                                         double alpha_level,
                                         double ratio_threshold,
                                         TailMode mode,
                                         std::uint64_t seed) {
    std::map<std::string, std::vector<const PublicationRecord*>> by_venue;
    for (const auto& p : pubs) {
        if (p.venue.empty() || p.authors.size() < 2) continue;
        by_venue[p.venue].push_back(&p);
    }
    VenueFlagResult result;
    for (const auto& [venue, papers] : by_venue) {
        VenueOrderStats stats = venue_test(venue, papers, alpha_level, ratio_threshold, mode, seed);
        if (stats.flagged) result.flagged.insert(venue);
        result.venues.push_back(std::move(stats));
    }
    return result;
}

RoleSeries role_series(const FacultyRecord& faculty,
                       const std::vector<PublicationRecord>& pubs,
                       const std::set<std::string>& flagged_venues,
                       int census_year) {
    const int span = career_span(faculty, pubs, census_year);
    const RoleCounts rc = count_roles(faculty, pubs, flagged_venues, span);

    RoleSeries out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.frac_first.assign(static_cast<std::size_t>(span), nan);
    out.frac_last.assign(static_cast<std::size_t>(span), nan);
    out.n_papers.assign(static_cast<std::size_t>(span), 0);
    for (std::size_t t = 0; t < static_cast<std::size_t>(span); ++t) {
        out.n_papers[t] = rc.total[t];
        if (rc.total[t] > 0) {
            out.frac_first[t] = static_cast<double>(rc.first[t]) / rc.total[t];
            out.frac_last[t] = static_cast<double>(rc.last[t]) / rc.total[t];
        }
    }
    return out;
}

std::optional<RoleFractions> transition_fractions(const FacultyRecord& faculty,
                                                  const std::vector<PublicationRecord>& pubs,
                                                  const std::set<std::string>& flagged_venues,
                                                  int census_year) {
    const int span = career_span(faculty, pubs, census_year);
    if (span <= 6) {
        throw std::invalid_argument("transition_fractions: career must be longer than six years");
    }
    const RoleCounts rc = count_roles(faculty, pubs, flagged_venues, span);

    int early_total = 0, early_first = 0, late_total = 0, late_first = 0;
    for (int t = 0; t <= 2; ++t) {
        early_total += rc.total[static_cast<std::size_t>(t)];
        early_first += rc.first[static_cast<std::size_t>(t)];
    }
    for (int t = 3; t <= 5; ++t) {
        late_total += rc.total[static_cast<std::size_t>(t)];
        late_first += rc.first[static_cast<std::size_t>(t)];
    }
    if (early_total == 0 || late_total == 0) return std::nullopt;

    RoleFractions rf;
    rf.faculty_id = faculty.faculty_id;
    rf.frac_first_early = static_cast<double>(early_first) / early_total;
    rf.frac_first_late = static_cast<double>(late_first) / late_total;
    rf.transitioned = rf.frac_first_early > rf.frac_first_late;
    return rf;
}

std::vector<RoleCurvePoint> role_curves(const std::vector<FacultyRecord>& faculty,
                                        const std::vector<PublicationRecord>& pubs,
                                        const std::set<std::string>& flagged_venues,
                                        const std::vector<double>& quantile_edges,
                                        int census_year) {
    std::map<std::string, std::vector<PublicationRecord>> by_faculty;
    for (const auto& p : pubs) by_faculty[p.faculty_id].push_back(p);

    const auto groups = rank_strata(faculty, quantile_edges);
    std::vector<RoleCurvePoint> out;
    static const std::vector<PublicationRecord> kNoPubs;
    for (std::size_t s = 0; s < groups.size(); ++s) {
        std::vector<RoleSeries> members;
        std::size_t max_span = 0;
        for (std::size_t idx : groups[s]) {
            const auto it = by_faculty.find(faculty[idx].faculty_id);
            members.push_back(role_series(faculty[idx], it == by_faculty.end() ? kNoPubs : it->second,
                                          flagged_venues, census_year));
            max_span = std::max(max_span, members.back().frac_first.size());
        }
        for (std::size_t t = 0; t < max_span; ++t) {
            RoleCurvePoint pt;
            pt.stratum = static_cast<int>(s + 1);
            pt.career_year = static_cast<int>(t);
            for (const auto& rs : members) {
                if (t >= rs.frac_first.size() || rs.n_papers[t] == 0) continue;
                pt.mean_frac_first += rs.frac_first[t];
                pt.mean_frac_last += rs.frac_last[t];
                pt.n += 1;
            }
            if (pt.n == 0) continue;
            pt.mean_frac_first /= pt.n;
            pt.mean_frac_last /= pt.n;
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace traj
