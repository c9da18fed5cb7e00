#include "tmac/suite.hpp"

#include <charconv>
#include <map>
#include <mutex>

#include "tmac/errors.hpp"

namespace tmac {

namespace {

std::mutex& epoch_mutex() {
    static std::mutex mu;
    return mu;
}

std::map<std::string, Timestamp, std::less<>>& epoch_registry() {
    static std::map<std::string, Timestamp, std::less<>> epochs = {{"UNIX", 0}};
    return epochs;
}

Timestamp find_epoch(std::string_view name) {
    std::lock_guard lock(epoch_mutex());
    auto& epochs = epoch_registry();
    auto it = epochs.find(name);
    if (it == epochs.end())
        throw UnsupportedEpoch("unknown epoch name: " + std::string(name));
    return it->second;
}

std::string epoch_name_of(Timestamp t0) {
    std::lock_guard lock(epoch_mutex());
    for (const auto& [name, epoch] : epoch_registry())
        if (epoch == t0)
            return name;
    return {};
}

// Decimal seconds, no leading zeros, no sign.
std::uint32_t parse_step_field(std::string_view field) {
    if (field.empty() || field.size() > 10)
        throw MalformedSuiteName("bad time-step field");
    if (field.size() > 1 && field[0] == '0')
        throw MalformedSuiteName("time-step field has a leading zero");
    std::uint32_t step = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), step);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw MalformedSuiteName("time-step field is not a decimal number");
    if (step < 1)
        throw MalformedSuiteName("time step must be at least 1 second");
    return step;
}

}  // namespace

void register_epoch(const std::string& name, Timestamp epoch_t0) {
    if (name.empty() || name.find('-') != std::string::npos)
        throw std::invalid_argument("epoch names must be non-empty and contain no '-'");
    std::lock_guard lock(epoch_mutex());
    epoch_registry().insert_or_assign(name, epoch_t0);
}

std::string TmacSuite::canonical_name() const {
    return format_suite_name(*this);
}

bool same_suite(const TmacSuite& a, const TmacSuite& b) {
    return a.hash.name == b.hash.name && a.time_params.epoch_t0 == b.time_params.epoch_t0 &&
           a.time_params.time_step_ts == b.time_params.time_step_ts;
}

TmacSuite default_suite() {
    return TmacSuite{find_hash("SHA256"), TimeParams{0, kDefaultTimeStep}, "UNIX"};
}

TmacSuite parse_suite_name(std::string_view name) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t dash = name.find('-', start);
        if (dash == std::string_view::npos) {
            fields.push_back(name.substr(start));
            break;
        }
        fields.push_back(name.substr(start, dash - start));
        start = dash + 1;
    }

    if (fields.size() != 2 && fields.size() != 4)
        throw MalformedSuiteName("suite name is not TMAC-<hash>[-<epoch>-<step>]");
    if (fields[0] != "TMAC")
        throw MalformedSuiteName("suite name must start with \"TMAC-\"");
    if (fields[1].empty())
        throw MalformedSuiteName("missing hash name");

    const HashAlgorithm& hash = find_hash(fields[1]);

    std::string epoch_name = "UNIX";
    std::uint32_t step = kDefaultTimeStep;
    if (fields.size() == 4) {
        if (fields[2].empty())
            throw MalformedSuiteName("missing epoch name");
        epoch_name = std::string(fields[2]);
        step = parse_step_field(fields[3]);
    }
    Timestamp epoch_t0 = find_epoch(epoch_name);

    return TmacSuite{hash, TimeParams{epoch_t0, step}, std::move(epoch_name)};
}

std::string format_suite_name(const TmacSuite& suite) {
    std::string epoch = suite.epoch_name;
    if (epoch.empty())
        epoch = epoch_name_of(suite.time_params.epoch_t0);
    if (epoch.empty())
        throw UnsupportedEpoch("suite epoch has no registered name");
    return "TMAC-" + suite.hash.name + "-" + epoch + "-" +
           std::to_string(suite.time_params.time_step_ts);
}

Bytes compute_tmac_at(const TmacSuite& suite, const SecretKey& key, ByteView msg,
                      TimeCounter counter) {
    Bytes derived = totp(suite.hash, key, counter);
    Bytes mac = hmac(suite.hash, derived, msg);
    secure_wipe(derived.data(), derived.size());
    return mac;
}

Bytes compute_tmac(const TmacSuite& suite, const SecretKey& key, ByteView msg,
                   Timestamp now) {
    return compute_tmac_at(suite, key, msg, time_counter(suite.time_params, now));
}

}  // namespace tmac
