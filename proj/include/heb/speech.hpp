#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "heb/types.hpp"

namespace heb {

struct SpeechRequest {
    std::string text;
    std::string language_tag = "en";
    std::string voice;
};

enum class AudioSource { remote, offline_stub, cache };

struct AudioAsset {
    std::filesystem::path path;  // cached file on disk
    std::string cache_key;       // stable hash of (text, language_tag, voice)
    AudioSource source = AudioSource::offline_stub;
    size_t byte_count = 0;
};

// Stable content-address for a request (SHA-256 hex).
std::string speech_cache_key(const SpeechRequest& request);

// Deterministic 0.5 s 440 Hz sine, 16-bit mono 22050 Hz.
std::vector<uint8_t> offline_stub_wav();

struct TtsConfig {
    std::string endpoint;  // e.g. http://host:port/tts ; empty in offline mode
    std::string api_key;   // optional bearer token
    bool offline = false;
    std::filesystem::path cache_dir = "tts-cache";
    int max_in_flight = 4;
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{100};

    // Reads TTS_ENDPOINT, TTS_API_KEY, TTS_OFFLINE.
    static TtsConfig from_env();
};

// Content-addressed synthesis client. Remote mode POSTs form fields `text`
// and `lang` and stores the audio bytes under the cache key; offline mode
// writes the stub WAV plus a sidecar transcript. Concurrent identical
// requests coalesce to a single network call; distinct requests are bounded
// by max_in_flight.
class TtsClient {
public:
    explicit TtsClient(TtsConfig config);

    // Throws std::runtime_error after max_attempts failed network tries or
    // on a non-audio response. Text must be non-empty and <= 64 chars.
    AudioAsset synthesize(const SpeechRequest& request);

    const TtsConfig& config() const { return config_; }

private:
    AudioAsset fetch_remote(const SpeechRequest& request, const std::string& key);
    AudioAsset write_offline(const SpeechRequest& request, const std::string& key);

    TtsConfig config_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::set<std::string> in_flight_;
    int active_ = 0;
};

// Hebrew reading order: rows grouped top-to-bottom with a tolerance of half
// the median box height, right-to-left within a row.
std::vector<Prediction> reading_order(std::vector<Prediction> preds,
                                      double conf_threshold);

struct PlaylistItem {
    Prediction pred;
    std::string label;  // phonetic name
    AudioAsset asset;
    bool ok = false;
    std::string error;
};

// One asset per surviving detection (or per unique letter when dedupe is
// set). Synthesis errors are recorded per item without aborting the list.
std::vector<PlaylistItem> speak_detections(TtsClient& client,
                                           const std::vector<Prediction>& predictions,
                                           double conf_threshold,
                                           bool dedupe = false);

}  // namespace heb
