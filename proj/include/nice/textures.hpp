#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nice/image.hpp"

namespace niceaug {

struct TextureRecord {
    std::string texture_id;
    Image image;  // at least 32x32
    std::string category;
};

// Directory of texture PNGs plus an index file `textures.json`:
//   [{"texture_id": "...", "file": "...", "category": "..."}]
class TextureStore {
  public:
    static TextureStore open(const std::filesystem::path& root);
    static TextureStore from_records(std::vector<TextureRecord> records);

    const TextureRecord& get(const std::string& texture_id) const;
    std::vector<std::string> ids() const;  // sorted
    std::size_t size() const { return records_.size(); }

  private:
    std::map<std::string, TextureRecord> records_;
};

// Deterministic procedural patches for offline runs and tests.
// kind: checker | stripes | dots | noise
Image make_procedural_texture(const std::string& kind, int size, std::uint64_t seed);

// Writes a small texture store (index + PNGs) with one patch per kind.
void write_procedural_texture_store(const std::filesystem::path& root, int size = 48,
                                    std::uint64_t seed = 7);

}  // namespace niceaug
