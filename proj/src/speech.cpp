#include "heb/speech.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <thread>

#include "heb/registry.hpp"
#include "httplib.h"

namespace heb {

namespace fs = std::filesystem;

namespace {

void append_u32le(std::vector<uint8_t>& v, uint32_t x) {
    v.push_back(static_cast<uint8_t>(x & 0xFF));
    v.push_back(static_cast<uint8_t>((x >> 8) & 0xFF));
    v.push_back(static_cast<uint8_t>((x >> 16) & 0xFF));
    v.push_back(static_cast<uint8_t>((x >> 24) & 0xFF));
}

void append_u16le(std::vector<uint8_t>& v, uint16_t x) {
    v.push_back(static_cast<uint8_t>(x & 0xFF));
    v.push_back(static_cast<uint8_t>((x >> 8) & 0xFF));
}

void write_bytes(const fs::path& path, const void* data, size_t len) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cache write failed: " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) throw std::runtime_error("cache write failed: " + path.string());
}

// endpoint "http://host:port/path" -> (base, path)
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::runtime_error("TTS endpoint must be a http(s) URL: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool is_audio_content_type(const std::string& ct) {
    return ct.rfind("audio/", 0) == 0 || ct == "application/octet-stream";
}

std::string extension_for(const std::string& content_type) {
    if (content_type.find("wav") != std::string::npos) return ".wav";
    return ".mp3";
}

}  // namespace

std::string speech_cache_key(const SpeechRequest& request) {
    std::string material =
        request.text + '\x1f' + request.language_tag + '\x1f' + request.voice;
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(material.data()), material.size(),
           digest);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(SHA256_DIGEST_LENGTH * 2);
    for (unsigned char b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xF]);
    }
    return out;
}

std::vector<uint8_t> offline_stub_wav() {
    constexpr int sample_rate = 22050;
    constexpr int n_samples = sample_rate / 2;  // 0.5 s
    constexpr double freq = 440.0;
    constexpr double amplitude = 0.4;

    std::vector<uint8_t> wav;
    uint32_t data_bytes = n_samples * 2;
    wav.insert(wav.end(), {'R', 'I', 'F', 'F'});
    append_u32le(wav, 36 + data_bytes);
    wav.insert(wav.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    append_u32le(wav, 16);
    append_u16le(wav, 1);  // PCM
    append_u16le(wav, 1);  // mono
    append_u32le(wav, sample_rate);
    append_u32le(wav, sample_rate * 2);
    append_u16le(wav, 2);
    append_u16le(wav, 16);
    wav.insert(wav.end(), {'d', 'a', 't', 'a'});
    append_u32le(wav, data_bytes);
    for (int i = 0; i < n_samples; ++i) {
        double s = amplitude * std::sin(2.0 * std::numbers::pi * freq * i / sample_rate);
        append_u16le(wav, static_cast<uint16_t>(
                              static_cast<int16_t>(std::lround(s * 32767.0))));
    }
    return wav;
}

TtsConfig TtsConfig::from_env() {
    TtsConfig cfg;
    if (const char* e = std::getenv("TTS_ENDPOINT")) cfg.endpoint = e;
    if (const char* k = std::getenv("TTS_API_KEY")) cfg.api_key = k;
    if (const char* o = std::getenv("TTS_OFFLINE")) cfg.offline = std::strcmp(o, "0") != 0;
    return cfg;
}

TtsClient::TtsClient(TtsConfig config) : config_(std::move(config)) {
    if (!config_.offline && config_.endpoint.empty()) {
        throw std::runtime_error("TTS: no endpoint configured and offline mode disabled");
    }
}

AudioAsset TtsClient::synthesize(const SpeechRequest& request) {
    if (request.text.empty() || request.text.size() > 64) {
        throw std::invalid_argument("speech request text must be 1..64 characters");
    }
    std::string key = speech_cache_key(request);
    fs::path bucket = config_.cache_dir / key.substr(0, 2);

    // single-flight: identical concurrent requests wait for the first,
    // distinct requests are bounded by max_in_flight
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] {
            return in_flight_.count(key) == 0 && active_ < config_.max_in_flight;
        });
        for (const char* ext : {".mp3", ".wav"}) {
            fs::path cached = bucket / (key + ext);
            if (fs::exists(cached)) {
                return AudioAsset{cached, key, AudioSource::cache,
                                  static_cast<size_t>(fs::file_size(cached))};
            }
        }
        in_flight_.insert(key);
        ++active_;
    }
    AudioAsset asset;
    std::exception_ptr err;
    try {
        asset = config_.offline ? write_offline(request, key)
                                : fetch_remote(request, key);
    } catch (...) {
        err = std::current_exception();
    }
    {
        std::lock_guard lock(mu_);
        in_flight_.erase(key);
        --active_;
    }
    cv_.notify_all();
    if (err) std::rethrow_exception(err);
    return asset;
}

AudioAsset TtsClient::write_offline(const SpeechRequest& request, const std::string& key) {
    fs::path bucket = config_.cache_dir / key.substr(0, 2);
    fs::path wav_path = bucket / (key + ".wav");
    auto wav = offline_stub_wav();
    write_bytes(wav_path, wav.data(), wav.size());
    write_bytes(bucket / (key + ".txt"), request.text.data(), request.text.size());
    return AudioAsset{wav_path, key, AudioSource::offline_stub, wav.size()};
}

AudioAsset TtsClient::fetch_remote(const SpeechRequest& request, const std::string& key) {
    auto [base, path] = split_endpoint(config_.endpoint);
    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    httplib::Params params{{"text", request.text}, {"lang", request.language_tag}};
    if (!request.voice.empty()) params.emplace("voice", request.voice);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    std::string last_error;
    for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(config_.backoff_base * (1 << (attempt - 1)));
        }
        auto res = client.Post(path, headers, params);
        if (!res) {
            last_error = "network error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP status " + std::to_string(res->status);
            continue;
        }
        std::string ct = res->get_header_value("Content-Type");
        if (!is_audio_content_type(ct)) {
            throw std::runtime_error("TTS returned non-audio response: " + ct);
        }
        fs::path out = config_.cache_dir / key.substr(0, 2) / (key + extension_for(ct));
        write_bytes(out, res->body.data(), res->body.size());
        return AudioAsset{out, key, AudioSource::remote, res->body.size()};
    }
    throw std::runtime_error("TTS request failed after " +
                             std::to_string(config_.max_attempts) +
                             " attempts: " + last_error);
}

std::vector<Prediction> reading_order(std::vector<Prediction> preds,
                                      double conf_threshold) {
    std::erase_if(preds, [&](const Prediction& p) { return p.confidence < conf_threshold; });
    if (preds.empty()) return preds;

    std::vector<double> heights;
    heights.reserve(preds.size());
    for (const auto& p : preds) heights.push_back(p.box.h);
    std::sort(heights.begin(), heights.end());
    double median_h = heights[heights.size() / 2];
    double row_tolerance = 0.5 * median_h;

    // group into rows top-to-bottom, then right-to-left within a row
    std::stable_sort(preds.begin(), preds.end(),
                     [](const Prediction& a, const Prediction& b) {
                         return a.box.cy < b.box.cy;
                     });
    std::vector<int> row(preds.size());
    int current_row = 0;
    double row_anchor = preds[0].box.cy;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].box.cy - row_anchor > row_tolerance) {
            ++current_row;
            row_anchor = preds[i].box.cy;
        }
        row[i] = current_row;
    }
    std::vector<size_t> order(preds.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (row[a] != row[b]) return row[a] < row[b];
        return preds[a].box.cx > preds[b].box.cx;
    });
    std::vector<Prediction> out;
    out.reserve(preds.size());
    for (size_t i : order) out.push_back(preds[i]);
    return out;
}

std::vector<PlaylistItem> speak_detections(TtsClient& client,
                                           const std::vector<Prediction>& predictions,
                                           double conf_threshold, bool dedupe) {
    auto ordered = reading_order(predictions, conf_threshold);
    std::vector<PlaylistItem> playlist;
    std::set<int> spoken;
    for (const auto& p : ordered) {
        if (dedupe && !spoken.insert(p.class_id).second) continue;
        PlaylistItem item;
        item.pred = p;
        try {
            item.label = phonetic_name(p.class_id);
            item.asset = client.synthesize(SpeechRequest{item.label, "en", ""});
            item.ok = true;
        } catch (const std::exception& e) {
            item.error = e.what();
        }
        playlist.push_back(std::move(item));
    }
    return playlist;
}

}  // namespace heb
