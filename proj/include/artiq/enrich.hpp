#pragma once

// Optional metadata enrichment: looks articles up by DOI on a REST service
// and fills in authors, references and citations. Responses are cached on
// disk as one JSON file per DOI hash so that later runs (and --offline
// runs) need no network.
//
// Service contract ("artiq" provider schema):
//   GET <endpoint><path>?doi=<url-encoded DOI>
//   200 -> {"doi": "...",
//           "authors":    [{"author_id": "...", "country": "DE" | null}, ...],
//           "references": [{"work_id": "...", "author_ids": ["..."]}, ...],
//           "citations":  [{"work_id": "...", "author_ids": ["..."], "year": 2021}, ...]}
//   404 -> DOI unknown to the service
// Any of the three arrays may be omitted, in which case the record keeps its
// existing value for that field.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "artiq/corpus.hpp"
#include "artiq/detail/strings.hpp"
#include "artiq/ingest.hpp"

namespace artiq {

inline constexpr const char* kEndpointEnvVar = "ARTIQ_METADATA_ENDPOINT";

struct EnrichOptions {
    std::string endpoint;          // e.g. "http://127.0.0.1:8080"; empty -> $ARTIQ_METADATA_ENDPOINT
    std::string path = "/works";
    std::filesystem::path cache_dir;
    bool offline = false;          // serve from cache only
    double max_requests_per_second = 10.0;
    int concurrency = 4;
    int max_retries = 3;
    std::chrono::milliseconds backoff{200}; // doubled after every failed attempt
    std::chrono::seconds timeout{10};
};

struct RecordIssue {
    std::string id;
    std::string message;
};

struct EnrichReport {
    std::size_t matched = 0;
    std::vector<std::string> unmatched;   // ids the service does not know
    std::vector<std::string> without_doi; // ids skipped for lack of a DOI
    std::vector<RecordIssue> fetch_errors;
    std::vector<RecordIssue> parse_errors;
    std::size_t cache_hits = 0;
    std::size_t network_calls = 0;

    double match_rate(std::size_t total) const {
        return total == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(total);
    }
};

struct EnrichResult {
    std::vector<ArticleRecord> records;
    EnrichReport report;
};

namespace detail {

inline std::string normalize_doi(std::string_view doi) { return lowercase(trim(doi)); }

inline std::string cache_key(std::string_view doi) { return hex64(fnv1a64(normalize_doi(doi))); }

// Token-bucket-free limiter: hands out evenly spaced start times.
class RateLimiter {
public:
    explicit RateLimiter(double per_second)
        : interval_(per_second > 0 ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                         std::chrono::duration<double>(1.0 / per_second))
                                   : std::chrono::steady_clock::duration::zero()) {}

    void acquire() {
        std::chrono::steady_clock::time_point slot;
        {
            std::lock_guard lock(mu_);
            const auto now = std::chrono::steady_clock::now();
            slot = std::max(now, next_);
            next_ = slot + interval_;
        }
        std::this_thread::sleep_until(slot);
    }

private:
    std::mutex mu_;
    std::chrono::steady_clock::duration interval_;
    std::chrono::steady_clock::time_point next_{};
};

// All cache writes go through one background thread.
class CacheWriter {
public:
    explicit CacheWriter(std::filesystem::path dir) : dir_(std::move(dir)), worker_([this] { run(); }) {}

    ~CacheWriter() {
        {
            std::lock_guard lock(mu_);
            stop_ = true;
        }
        cv_.notify_one();
        worker_.join();
    }

    CacheWriter(const CacheWriter&) = delete;
    CacheWriter& operator=(const CacheWriter&) = delete;

    void submit(std::string key, std::string content) {
        {
            std::lock_guard lock(mu_);
            queue_.emplace_back(std::move(key), std::move(content));
        }
        cv_.notify_one();
    }

private:
    void run() {
        for (;;) {
            std::pair<std::string, std::string> item;
            {
                std::unique_lock lock(mu_);
                cv_.wait(lock, [&] { return stop_ || !queue_.empty(); });
                if (queue_.empty()) return;
                item = std::move(queue_.front());
                queue_.pop_front();
            }
            std::error_code ec;
            std::filesystem::create_directories(dir_, ec);
            const auto final_path = dir_ / (item.first + ".json");
            const auto tmp_path = dir_ / (item.first + ".json.tmp");
            {
                std::ofstream out(tmp_path, std::ios::binary);
                out << item.second;
            }
            std::filesystem::rename(tmp_path, final_path, ec);
        }
    }

    std::filesystem::path dir_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::pair<std::string, std::string>> queue_;
    bool stop_ = false;
    std::thread worker_;
};

struct Lookup {
    enum class Kind { found, not_found, fetch_error } kind = Kind::fetch_error;
    nlohmann::json body;
    std::string error;
    bool from_cache = false;
    std::size_t calls = 0;
};

inline std::optional<Lookup> read_cache(const std::filesystem::path& dir, const std::string& key) {
    if (dir.empty()) return std::nullopt;
    std::ifstream in(dir / (key + ".json"), std::ios::binary);
    if (!in) return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(in);
        Lookup l;
        l.from_cache = true;
        l.kind = j.at("found").get<bool>() ? Lookup::Kind::found : Lookup::Kind::not_found;
        if (l.kind == Lookup::Kind::found) l.body = j.at("response");
        return l;
    } catch (const std::exception&) {
        return std::nullopt; // unreadable cache entries are refetched
    }
}

inline Lookup fetch(httplib::Client& client, const EnrichOptions& opts, RateLimiter& limiter,
                    const std::string& doi) {
    Lookup l;
    const std::string target =
        opts.path + "?doi=" + httplib::detail::encode_query_param(doi);
    auto delay = opts.backoff;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
        limiter.acquire();
        ++l.calls;
        auto res = client.Get(target);
        if (!res) {
            l.error = "network error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 404) {
            l.error.clear();
            l.kind = Lookup::Kind::not_found;
            return l;
        }
        if (res->status == 200) {
            l.error.clear();
            try {
                l.body = nlohmann::json::parse(res->body);
                l.kind = Lookup::Kind::found;
            } catch (const std::exception& e) {
                l.kind = Lookup::Kind::found;
                l.body = nullptr;
                l.error = std::string("malformed response: ") + e.what();
            }
            return l;
        }
        l.error = "HTTP status " + std::to_string(res->status);
        if (res->status < 500 && res->status != 429) break;
    }
    l.kind = Lookup::Kind::fetch_error;
    return l;
}

inline void apply_response(ArticleRecord& rec, const nlohmann::json& body) {
    if (!body.is_object()) throw std::invalid_argument("response is not a JSON object");
    std::vector<AuthorRef> authors;
    std::vector<WorkRef> refs;
    std::vector<CitingWork> cites;
    if (body.contains("authors"))
        for (const auto& a : body.at("authors")) authors.push_back(author_from_json(a));
    if (body.contains("references"))
        for (const auto& w : body.at("references")) refs.push_back(work_from_json(w));
    if (body.contains("citations"))
        for (const auto& c : body.at("citations")) cites.push_back(citing_from_json(c));
    if (body.contains("authors")) rec.authors = std::move(authors);
    if (body.contains("references")) rec.references = std::move(refs);
    if (body.contains("citations")) rec.citations = std::move(cites);
}

} // namespace detail

/// Enriches records by DOI. Per-record failures are reported, never thrown.
inline EnrichResult enrich_from_metadata_service(std::vector<ArticleRecord> records,
                                                 EnrichOptions opts) {
    if (opts.endpoint.empty())
        if (const char* env = std::getenv(kEndpointEnvVar)) opts.endpoint = env;
    if (opts.concurrency < 1) opts.concurrency = 1;

    struct Outcome {
        detail::Lookup lookup;
        bool has_doi = false;
    };
    std::vector<Outcome> outcomes(records.size());
    detail::RateLimiter limiter(opts.max_requests_per_second);
    std::optional<detail::CacheWriter> writer;
    if (!opts.cache_dir.empty() && !opts.offline) writer.emplace(opts.cache_dir);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        std::unique_ptr<httplib::Client> client;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= records.size()) return;
            auto& out = outcomes[i];
            const auto& rec = records[i];
            if (!rec.doi || detail::trim(*rec.doi).empty()) continue;
            out.has_doi = true;
            const auto key = detail::cache_key(*rec.doi);
            if (auto cached = detail::read_cache(opts.cache_dir, key)) {
                out.lookup = std::move(*cached);
                continue;
            }
            if (opts.offline) {
                out.lookup.kind = detail::Lookup::Kind::fetch_error;
                out.lookup.error = "offline and not cached";
                continue;
            }
            if (opts.endpoint.empty()) {
                out.lookup.kind = detail::Lookup::Kind::fetch_error;
                out.lookup.error = "no metadata endpoint configured";
                continue;
            }
            if (!client) {
                client = std::make_unique<httplib::Client>(opts.endpoint);
                client->set_connection_timeout(opts.timeout);
                client->set_read_timeout(opts.timeout);
            }
            out.lookup = detail::fetch(*client, opts, limiter, detail::normalize_doi(*rec.doi));
            if (writer && out.lookup.error.empty() &&
                out.lookup.kind != detail::Lookup::Kind::fetch_error) {
                nlohmann::json entry;
                entry["doi"] = detail::normalize_doi(*rec.doi);
                entry["found"] = out.lookup.kind == detail::Lookup::Kind::found;
                if (out.lookup.kind == detail::Lookup::Kind::found) entry["response"] = out.lookup.body;
                writer->submit(key, entry.dump());
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        const auto n = std::min<std::size_t>(static_cast<std::size_t>(opts.concurrency),
                                             std::max<std::size_t>(records.size(), 1));
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
    }
    writer.reset();

    EnrichResult result;
    auto& rep = result.report;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto& rec = records[i];
        const auto& o = outcomes[i];
        if (!o.has_doi) {
            rep.without_doi.push_back(rec.id);
            continue;
        }
        rep.network_calls += o.lookup.calls;
        if (o.lookup.from_cache) ++rep.cache_hits;
        switch (o.lookup.kind) {
        case detail::Lookup::Kind::not_found: rep.unmatched.push_back(rec.id); break;
        case detail::Lookup::Kind::fetch_error: rep.fetch_errors.push_back({rec.id, o.lookup.error}); break;
        case detail::Lookup::Kind::found:
            if (!o.lookup.error.empty()) {
                rep.parse_errors.push_back({rec.id, o.lookup.error});
                break;
            }
            try {
                ArticleRecord updated = rec;
                detail::apply_response(updated, o.lookup.body);
                rec = std::move(updated);
                ++rep.matched;
            } catch (const std::exception& e) {
                rep.parse_errors.push_back({rec.id, std::string("malformed response: ") + e.what()});
            }
            break;
        }
    }
    result.records = std::move(records);
    return result;
}

} // namespace artiq
