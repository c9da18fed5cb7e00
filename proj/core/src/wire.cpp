#include "tmac/wire.hpp"

#include <cstring>
#include <limits>

#include "tmac/errors.hpp"

namespace tmac {

namespace {

// Cursor over the input that refuses to read past the end.
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

    // Length is validated against the remaining input before any allocation.
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
            throw MalformedEnvelope("envelope truncated");
    }

    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace

Bytes encode_envelope(const Envelope& env) {
    if (env.suite_name.size() > std::numeric_limits<std::uint8_t>::max())
        throw MalformedEnvelope("suite name too long for the wire format");
    if (env.identifier.size() > std::numeric_limits<std::uint16_t>::max())
        throw MalformedEnvelope("identifier too long for the wire format");
    if (env.mac.size() > std::numeric_limits<std::uint16_t>::max())
        throw MalformedEnvelope("mac too long for the wire format");
    if (env.message.size() > std::numeric_limits<std::uint32_t>::max())
        throw MalformedEnvelope("message too long for the wire format");

    Bytes out;
    out.reserve(4 + 1 + 1 + env.suite_name.size() + 2 + env.identifier.size() + 2 +
                env.mac.size() + 4 + env.message.size());
    out.insert(out.end(), kWireMagic.begin(), kWireMagic.end());
    out.push_back(kWireVersion);
    out.push_back(static_cast<std::uint8_t>(env.suite_name.size()));
    out.insert(out.end(), env.suite_name.begin(), env.suite_name.end());
    put_u16_be(out, static_cast<std::uint16_t>(env.identifier.size()));
    out.insert(out.end(), env.identifier.begin(), env.identifier.end());
    put_u16_be(out, static_cast<std::uint16_t>(env.mac.size()));
    out.insert(out.end(), env.mac.begin(), env.mac.end());
    put_u32_be(out, static_cast<std::uint32_t>(env.message.size()));
    out.insert(out.end(), env.message.begin(), env.message.end());
    return out;
}

Envelope decode_envelope(ByteView wire) {
    Reader in(wire);

    Bytes magic = in.take(kWireMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kWireMagic.begin()))
        throw MalformedEnvelope("bad magic");
    if (in.u8() != kWireVersion)
        throw MalformedEnvelope("unsupported wire version");

    Envelope env;
    Bytes suite = in.take(in.u8());
    env.suite_name.assign(suite.begin(), suite.end());
    env.identifier = in.take(in.u16_be());
    env.mac = in.take(in.u16_be());
    env.message = in.take(in.u32_be());

    if (!in.exhausted())
        throw MalformedEnvelope("trailing bytes after message payload");
    return env;
}

}  // namespace tmac
