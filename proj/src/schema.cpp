#include "advexplain/schema.hpp"

#include <cstdint>
#include <sstream>

#include "advexplain/error.hpp"

namespace advexplain {

std::string class_name(ClassLabel label) {
    switch (label) {
        case ClassLabel::Normal: return "normal";
        case ClassLabel::Dos: return "dos";
        case ClassLabel::Probe: return "probe";
    }
    throw ValueError("invalid class label");
}

std::optional<ClassLabel> class_from_name(std::string_view name) {
    if (name == "normal") return ClassLabel::Normal;
    if (name == "dos") return ClassLabel::Dos;
    if (name == "probe") return ClassLabel::Probe;
    return std::nullopt;
}

namespace {

// KDD-99 attack-name -> category table, extended with the extra attack
// names that appear only in the NSL-KDD test split.
const std::unordered_map<std::string_view, AttackCategory>& taxonomy() {
    static const std::unordered_map<std::string_view, AttackCategory> table = {
        {"normal", AttackCategory::Normal},
        // DOS
        {"back", AttackCategory::Dos},
        {"land", AttackCategory::Dos},
        {"neptune", AttackCategory::Dos},
        {"pod", AttackCategory::Dos},
        {"smurf", AttackCategory::Dos},
        {"teardrop", AttackCategory::Dos},
        {"apache2", AttackCategory::Dos},
        {"udpstorm", AttackCategory::Dos},
        {"processtable", AttackCategory::Dos},
        {"mailbomb", AttackCategory::Dos},
        // Probe
        {"satan", AttackCategory::Probe},
        {"ipsweep", AttackCategory::Probe},
        {"nmap", AttackCategory::Probe},
        {"portsweep", AttackCategory::Probe},
        {"mscan", AttackCategory::Probe},
        {"saint", AttackCategory::Probe},
        // R2L
        {"guess_passwd", AttackCategory::R2L},
        {"ftp_write", AttackCategory::R2L},
        {"imap", AttackCategory::R2L},
        {"phf", AttackCategory::R2L},
        {"multihop", AttackCategory::R2L},
        {"warezmaster", AttackCategory::R2L},
        {"warezclient", AttackCategory::R2L},
        {"spy", AttackCategory::R2L},
        {"xlock", AttackCategory::R2L},
        {"xsnoop", AttackCategory::R2L},
        {"snmpguess", AttackCategory::R2L},
        {"snmpgetattack", AttackCategory::R2L},
        {"httptunnel", AttackCategory::R2L},
        {"sendmail", AttackCategory::R2L},
        {"named", AttackCategory::R2L},
        {"worm", AttackCategory::R2L},
        // U2R
        {"buffer_overflow", AttackCategory::U2R},
        {"loadmodule", AttackCategory::U2R},
        {"rootkit", AttackCategory::U2R},
        {"perl", AttackCategory::U2R},
        {"sqlattack", AttackCategory::U2R},
        {"xterm", AttackCategory::U2R},
        {"ps", AttackCategory::U2R},
    };
    return table;
}

}  // namespace

std::optional<AttackCategory> attack_category(std::string_view attack_name) {
    const auto& table = taxonomy();
    auto it = table.find(attack_name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features)
    : features_(std::move(features)) {
    std::size_t offset = 0;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        FeatureSpec& f = features_[i];
        if (f.kind == FeatureKind::Categorical) {
            if (f.levels.empty())
                throw ValueError("categorical feature '" + f.name + "' has no levels");
        } else if (!f.levels.empty()) {
            throw ValueError("non-categorical feature '" + f.name + "' has levels");
        }
        const std::size_t width =
            f.kind == FeatureKind::Categorical ? f.levels.size() : 1;
        f.span_begin = offset;
        f.span_end = offset + width;
        offset += width;
        if (!by_name_.emplace(f.name, i).second)
            throw ValueError("duplicate feature name '" + f.name + "'");
    }
    encoded_dim_ = offset;
}

bool FeatureSchema::has(std::string_view name) const {
    return by_name_.count(std::string(name)) > 0;
}

const FeatureSpec& FeatureSchema::at(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end())
        throw ValueError("unknown feature '" + std::string(name) + "'");
    return features_[it->second];
}

std::string FeatureSchema::fingerprint() const {
    // FNV-1a over the canonical textual form of the schema.
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= 0x1f;
        h *= 1099511628211ull;
    };
    for (const auto& f : features_) {
        mix(f.name);
        mix(std::to_string(static_cast<int>(f.kind)));
        for (const auto& l : f.levels) mix(l);
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

FeatureSchema FeatureSchema::nsl_kdd() {
    using K = FeatureKind;
    const std::vector<std::string> protocols = {"icmp", "tcp", "udp"};
    const std::vector<std::string> services = {
        "IRC", "X11", "Z39_50", "aol", "auth", "bgp", "courier", "csnet_ns",
        "ctf", "daytime", "discard", "domain", "domain_u", "echo", "eco_i",
        "ecr_i", "efs", "exec", "finger", "ftp", "ftp_data", "gopher",
        "harvest", "hostnames", "http", "http_2784", "http_443", "http_8001",
        "imap4", "iso_tsap", "klogin", "kshell", "ldap", "link", "login",
        "mtp", "name", "netbios_dgm", "netbios_ns", "netbios_ssn", "netstat",
        "nnsp", "nntp", "ntp_u", "other", "pm_dump", "pop_2", "pop_3",
        "printer", "private", "red_i", "remote_job", "rje", "shell", "smtp",
        "sql_net", "ssh", "sunrpc", "supdup", "systat", "telnet", "tftp_u",
        "tim_i", "time", "urh_i", "urp_i", "uucp", "uucp_path", "vmnet",
        "whois"};
    const std::vector<std::string> flags = {
        "OTH", "REJ", "RSTO", "RSTOS0", "RSTR",
        "S0",  "S1",  "S2",   "S3",     "SF",   "SH"};

    std::vector<FeatureSpec> fs;
    auto add = [&fs](std::string name, K kind, std::vector<std::string> levels = {}) {
        fs.push_back(FeatureSpec{std::move(name), kind, std::move(levels)});
    };
    add("duration", K::Integer);
    add("protocol_type", K::Categorical, protocols);
    add("service", K::Categorical, services);
    add("flag", K::Categorical, flags);
    add("src_bytes", K::Integer);
    add("dst_bytes", K::Integer);
    add("land", K::Binary);
    add("wrong_fragment", K::Integer);
    add("urgent", K::Integer);
    add("hot", K::Integer);
    add("num_failed_logins", K::Integer);
    add("logged_in", K::Binary);
    add("num_compromised", K::Integer);
    add("root_shell", K::Binary);
    add("su_attempted", K::Integer);
    add("num_root", K::Integer);
    add("num_file_creations", K::Integer);
    add("num_shells", K::Integer);
    add("num_access_files", K::Integer);
    add("num_outbound_cmds", K::Integer);
    add("is_host_login", K::Binary);
    add("is_guest_login", K::Binary);
    add("count", K::Integer);
    add("srv_count", K::Integer);
    add("serror_rate", K::Continuous);
    add("srv_serror_rate", K::Continuous);
    add("rerror_rate", K::Continuous);
    add("srv_rerror_rate", K::Continuous);
    add("same_srv_rate", K::Continuous);
    add("diff_srv_rate", K::Continuous);
    add("srv_diff_host_rate", K::Continuous);
    add("dst_host_count", K::Integer);
    add("dst_host_srv_count", K::Integer);
    add("dst_host_same_srv_rate", K::Continuous);
    add("dst_host_diff_srv_rate", K::Continuous);
    add("dst_host_same_src_port_rate", K::Continuous);
    add("dst_host_srv_diff_host_rate", K::Continuous);
    add("dst_host_serror_rate", K::Continuous);
    add("dst_host_srv_serror_rate", K::Continuous);
    add("dst_host_rerror_rate", K::Continuous);
    add("dst_host_srv_rerror_rate", K::Continuous);
    return FeatureSchema(std::move(fs));
}

}  // namespace advexplain
