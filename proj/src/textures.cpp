#include "nice/textures.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "nice/errors.hpp"
#include "nice/image_io.hpp"
#include "nice/rng.hpp"

namespace niceaug {

using nlohmann::json;
namespace fs = std::filesystem;

TextureStore TextureStore::open(const fs::path& root) {
    const fs::path index_path = root / "textures.json";
    std::ifstream in(index_path);
    if (!in) throw IoError("texture store index not found: " + index_path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("malformed texture index " + index_path.string() + ": " + e.what());
    }

    TextureStore store;
    for (const auto& entry : doc) {
        TextureRecord record;
        record.texture_id = entry.at("texture_id").get<std::string>();
        record.category = entry.value("category", "");
        record.image = load_image_png(root / entry.at("file").get<std::string>());
        if (record.image.height < 32 || record.image.width < 32) {
            throw IoError("texture '" + record.texture_id + "' is smaller than 32x32");
        }
        store.records_[record.texture_id] = std::move(record);
    }
    return store;
}

TextureStore TextureStore::from_records(std::vector<TextureRecord> records) {
    TextureStore store;
    for (TextureRecord& record : records) {
        if (record.image.height < 32 || record.image.width < 32) {
            throw InvalidArgumentError("texture '" + record.texture_id +
                                       "' is smaller than 32x32");
        }
        store.records_[record.texture_id] = std::move(record);
    }
    return store;
}

const TextureRecord& TextureStore::get(const std::string& texture_id) const {
    auto it = records_.find(texture_id);
    if (it == records_.end()) throw InvalidArgumentError("unknown texture_id: " + texture_id);
    return it->second;
}

std::vector<std::string> TextureStore::ids() const {
    std::vector<std::string> out;
    out.reserve(records_.size());
    for (const auto& [id, record] : records_) out.push_back(id);
    return out;
}

Image make_procedural_texture(const std::string& kind, int size, std::uint64_t seed) {
    Image img(size, size);
    SplitMix64 rng(seed);
    const std::array<std::uint8_t, 3> fg = {static_cast<std::uint8_t>(64 + rng.next_below(192)),
                                            static_cast<std::uint8_t>(64 + rng.next_below(192)),
                                            static_cast<std::uint8_t>(64 + rng.next_below(192))};
    const std::array<std::uint8_t, 3> bg = {static_cast<std::uint8_t>(rng.next_below(96)),
                                            static_cast<std::uint8_t>(rng.next_below(96)),
                                            static_cast<std::uint8_t>(rng.next_below(96))};
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            bool on;
            if (kind == "checker") {
                on = ((x / 8) + (y / 8)) % 2 == 0;
            } else if (kind == "stripes") {
                on = (x / 6) % 2 == 0;
            } else if (kind == "dots") {
                const int dx = x % 12 - 6, dy = y % 12 - 6;
                on = dx * dx + dy * dy <= 9;
            } else if (kind == "noise") {
                on = rng.next_below(2) == 0;
            } else {
                throw InvalidArgumentError("unknown texture kind: " + kind);
            }
            img.set_pixel(y, x, on ? fg : bg);
        }
    }
    return img;
}

void write_procedural_texture_store(const fs::path& root, int size, std::uint64_t seed) {
    fs::create_directories(root);
    json index = json::array();
    int i = 0;
    for (const std::string kind : {"checker", "stripes", "dots", "noise"}) {
        const std::string id = kind;
        const std::string file = kind + ".png";
        save_image_png(make_procedural_texture(kind, size, seed + i++), root / file);
        index.push_back({{"texture_id", id}, {"file", file}, {"category", kind}});
    }
    std::ofstream out(root / "textures.json");
    out << index.dump(2) << '\n';
}

}  // namespace niceaug
