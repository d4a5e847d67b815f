// Loads the sample corpus, computes indicators and compares abstract
// lengths across groups. Also checks two APA-style statistics.
//
//   ./artiq_quickstart [corpus.jsonl]

#include <cstdio>
#include <iostream>

#include "artiq/indicators.hpp"
#include "artiq/ingest.hpp"
#include "artiq/report.hpp"
#include "artiq/statparse.hpp"

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : ARTIQ_DEMO_CORPUS;
    auto load = artiq::load_corpus(path, {});
    auto kept = artiq::filter_non_research(load.corpus.records(), artiq::default_exclusion_rules());
    artiq::CorpusSet corpus(load.corpus.groups(), kept.kept);
    std::cout << "articles: " << corpus.size() << " (excluded " << kept.excluded.size() << ")\n";

    const auto set = artiq::compute_indicators(corpus, artiq::IndicatorConfig{});
    const auto cmp = artiq::compare_groups(set.vectors, corpus.groups(), artiq::Indicator::abstract_words);
    if (cmp.omnibus)
        std::printf("abstract words: F(%g, %g) = %.2f, p = %.4g\n", cmp.omnibus->df1, cmp.omnibus->df2.value_or(0),
                    cmp.omnibus->statistic, cmp.omnibus->p_value);
    for (const auto& p : cmp.pairwise)
        std::printf("  %s vs %s: diff %.1f, p_adj %.4f\n", cmp.groups[p.group_a].c_str(),
                    cmp.groups[p.group_b].c_str(), p.estimate, p.p_adjusted);

    for (const char* text : {"t(28) = 2.20, p = .04", "t(28) = 1.50, p < .05"})
        for (const auto& c : artiq::check_text(text))
            std::printf("%-24s recomputed p = %.4f -> %s\n", text, c.verdict->p_recomputed,
                        artiq::to_string(c.verdict->status));
}
