#include "tmac/state_file.hpp"

#include <cstdio>
#include <fstream>
#include <limits>

#include "tmac/errors.hpp"
#include "tmac/hash.hpp"

namespace tmac {

namespace {

constexpr std::array<std::uint8_t, 4> kStateMagic = {'T', 'M', 'S', 'T'};
constexpr std::uint8_t kStateVersion = 0x01;
constexpr std::size_t kChecksumLen = 32;

class Reader {
public:
    explicit Reader(ByteView data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint16_t u16_be() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    std::uint32_t u32_be() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v = v << 8 | data_[pos_ + i];
        pos_ += 4;
        return v;
    }

    std::uint64_t u64_be() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v = v << 8 | data_[pos_ + i];
        pos_ += 8;
        return v;
    }

    Bytes take(std::size_t n) {
        need(n);
        Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }

    bool exhausted() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) {
        if (data_.size() - pos_ < n)
            throw StateFileCorrupt("state file truncated");
    }

    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace

void save_verifier_state(const std::filesystem::path& path, const Verifier& verifier,
                         TimeCounter last_counter) {
    const std::string suite_name = verifier.suite().canonical_name();
    if (suite_name.size() > std::numeric_limits<std::uint8_t>::max())
        throw IoError("suite name too long for the state file");

    auto windows = verifier.cache().snapshot();
    const unsigned w = verifier.acceptance_window();
    const std::uint64_t lowest_kept =
        last_counter.value >= w - 1 ? last_counter.value - (w - 1) : 0;

    Bytes body;
    body.insert(body.end(), kStateMagic.begin(), kStateMagic.end());
    body.push_back(kStateVersion);
    body.push_back(static_cast<std::uint8_t>(suite_name.size()));
    body.insert(body.end(), suite_name.begin(), suite_name.end());
    put_u32_be(body, w);
    put_u64_be(body, last_counter.value);

    std::uint32_t kept = 0;
    for (const auto& [counter, ids] : windows)
        if (counter >= lowest_kept && counter <= last_counter.value)
            ++kept;
    put_u32_be(body, kept);

    for (const auto& [counter, ids] : windows) {
        if (counter < lowest_kept || counter > last_counter.value)
            continue;
        put_u64_be(body, counter);
        put_u32_be(body, static_cast<std::uint32_t>(ids.size()));
        for (const Bytes& id : ids) {
            if (id.size() > std::numeric_limits<std::uint16_t>::max())
                throw IoError("identifier too long for the state file");
            put_u16_be(body, static_cast<std::uint16_t>(id.size()));
            body.insert(body.end(), id.begin(), id.end());
        }
    }

    Bytes checksum = digest(find_hash("SHA256"), body);
    body.insert(body.end(), checksum.begin(), checksum.end());

    // Write-temp-then-rename so a crash never leaves a half-written file.
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(reinterpret_cast<const char*>(body.data()),
                  static_cast<std::streamsize>(body.size()));
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename state file into place: " + ec.message());
    }
}

bool load_verifier_state(const std::filesystem::path& path, Verifier& verifier) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (raw.size() < kStateMagic.size() + 1 + kChecksumLen)
        throw StateFileCorrupt("state file too short");

    ByteView body(raw.data(), raw.size() - kChecksumLen);
    ByteView stored_sum(raw.data() + raw.size() - kChecksumLen, kChecksumLen);
    Bytes computed = digest(find_hash("SHA256"), body);
    if (!std::equal(computed.begin(), computed.end(), stored_sum.begin()))
        throw StateFileCorrupt("checksum mismatch");

    Reader reader(body);
    Bytes magic = reader.take(kStateMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kStateMagic.begin()))
        throw StateFileCorrupt("bad magic");
    if (reader.u8() != kStateVersion)
        throw StateFileCorrupt("unsupported state file version");

    Bytes suite_raw = reader.take(reader.u8());
    std::string suite_name(suite_raw.begin(), suite_raw.end());
    if (suite_name != verifier.suite().canonical_name())
        throw StateFileCorrupt("state file belongs to suite " + suite_name);

    std::uint32_t w = reader.u32_be();
    if (w != verifier.acceptance_window())
        throw StateFileCorrupt("state file acceptance window mismatch");

    std::uint64_t last_counter = reader.u64_be();
    std::uint64_t lowest_kept = last_counter >= w - 1 ? last_counter - (w - 1) : 0;

    std::uint32_t window_count = reader.u32_be();
    std::map<std::uint64_t, std::set<Bytes>> windows;
    for (std::uint32_t i = 0; i < window_count; ++i) {
        std::uint64_t counter = reader.u64_be();
        if (counter < lowest_kept || counter > last_counter)
            throw StateFileCorrupt("window counter outside the acceptance window");
        std::uint32_t id_count = reader.u32_be();
        std::set<Bytes>& ids = windows[counter];
        for (std::uint32_t j = 0; j < id_count; ++j)
            ids.insert(reader.take(reader.u16_be()));
    }
    if (!reader.exhausted())
        throw StateFileCorrupt("trailing bytes in state file");

    verifier.cache().restore(std::move(windows));
    return true;
}

}  // namespace tmac
