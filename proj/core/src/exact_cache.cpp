#include "apfree/exact_cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string_view>

#include "apfree/ap_verify.hpp"
#include "apfree/errors.hpp"

namespace apfree {

namespace {

// Closes the descriptor, which also drops any flock held on it.
class FileLock {
public:
    FileLock(const std::filesystem::path& path, int flags, int operation) {
        fd_ = ::open(path.c_str(), flags, 0644);
        if (fd_ < 0) throw IoError("cannot open cache " + path.string() + ": " + std::strerror(errno));
        if (::flock(fd_, operation) != 0) {
            const int err = errno;
            ::close(fd_);
            throw IoError("cannot lock cache " + path.string() + ": " + std::strerror(err));
        }
    }
    ~FileLock() {
        if (fd_ >= 0) ::close(fd_);
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

    int fd() const noexcept { return fd_; }

private:
    int fd_ = -1;
};

constexpr std::uint64_t kMaxCachedN = std::uint64_t{1} << 20;

template <class Int>
std::optional<Int> parse_uint(std::string_view text) {
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t begin = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, begin);
        parts.push_back(text.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin));
        if (pos == std::string_view::npos) break;
        begin = pos + 1;
    }
    return parts;
}

void write_all(int fd, const std::string& data, const std::filesystem::path& path) {
    std::size_t written = 0;
    while (written < data.size()) {
        const ssize_t rc = ::write(fd, data.data() + written, data.size() - written);
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw IoError("write failure on cache " + path.string() + ": " + std::strerror(errno));
        }
        written += static_cast<std::size_t>(rc);
    }
}

}  // namespace

ExactCache::ExactCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

std::string ExactCache::format_row(unsigned k, std::uint64_t n, std::uint64_t value, const IntegerSet& witness) {
    std::ostringstream row;
    row << k << ',' << n << ',' << value << ',';
    bool first = true;
    for (std::uint64_t m : witness) {
        if (!first) row << ';';
        row << m;
        first = false;
    }
    return row.str();
}

std::pair<std::optional<CacheEntry>, std::string> ExactCache::parse_row(const std::string& raw) {
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto fields = split(line, ',');
    if (fields.size() != 4) return {std::nullopt, "expected 4 fields, found " + std::to_string(fields.size())};

    const auto k = parse_uint<unsigned>(fields[0]);
    const auto n = parse_uint<std::uint64_t>(fields[1]);
    const auto value = parse_uint<std::uint64_t>(fields[2]);
    if (!k || *k < 3) return {std::nullopt, "bad k '" + std::string(fields[0]) + "'"};
    if (!n || *n == 0) return {std::nullopt, "bad n '" + std::string(fields[1]) + "'"};
    if (*n > kMaxCachedN) return {std::nullopt, "n " + std::to_string(*n) + " beyond the exact-solver range"};
    if (!value || *value > *n) return {std::nullopt, "bad value '" + std::string(fields[2]) + "'"};

    std::vector<std::uint64_t> members;
    if (!fields[3].empty()) {
        for (std::string_view part : split(fields[3], ';')) {
            const auto m = parse_uint<std::uint64_t>(part);
            if (!m || *m == 0 || *m > *n) return {std::nullopt, "bad witness member '" + std::string(part) + "'"};
            if (!members.empty() && *m <= members.back()) return {std::nullopt, "witness not strictly ascending"};
            members.push_back(*m);
        }
    }
    if (members.size() != *value) {
        return {std::nullopt, "witness has " + std::to_string(members.size()) + " members but value is " +
                                  std::to_string(*value)};
    }
    IntegerSet witness = IntegerSet::from_members(*n, members);
    const Verdict verdict = verify_ap_free(witness, *k);
    if (!verdict.ap_free()) {
        return {std::nullopt, "witness contains a " + std::to_string(*k) + "-AP at start " +
                                  std::to_string(verdict.witness->start)};
    }
    return {CacheEntry{*k, *n, *value, std::move(witness)}, {}};
}

void ExactCache::load() {
    if (!path_ || !std::filesystem::exists(*path_)) return;
    FileLock lock(*path_, O_RDONLY, LOCK_SH);
    std::ifstream in(*path_);
    if (!in) throw IoError("cannot read cache " + path_->string());

    std::unique_lock guard(mutex_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1) {
            std::string_view head(line);
            if (!head.empty() && head.back() == '\r') head.remove_suffix(1);
            if (head == kHeader) continue;
            warnings_.push_back(path_->string() + ":1: missing header '" + kHeader + "'");
        }
        auto [entry, reason] = parse_row(line);
        if (!entry) {
            warnings_.push_back(path_->string() + ":" + std::to_string(line_no) + ": rejected row: " + reason);
            continue;
        }
        const auto key = std::make_pair(entry->k, entry->n);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            if (it->second.value != entry->value) {
                warnings_.push_back(path_->string() + ":" + std::to_string(line_no) + ": conflicting value " +
                                    std::to_string(entry->value) + " for k=" + std::to_string(entry->k) +
                                    " n=" + std::to_string(entry->n) + "; keeping " +
                                    std::to_string(it->second.value));
            }
            continue;
        }
        entries_.emplace(key, std::move(*entry));
    }
}

std::optional<CacheEntry> ExactCache::lookup(unsigned k, std::uint64_t n) const {
    std::shared_lock guard(mutex_);
    auto it = entries_.find({k, n});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ExactCache::store(unsigned k, std::uint64_t n, std::uint64_t value, const IntegerSet& witness) {
    std::unique_lock guard(mutex_);
    auto it = entries_.find({k, n});
    if (it != entries_.end() && it->second.value == value) return;

    if (path_) {
        FileLock lock(*path_, O_WRONLY | O_APPEND | O_CREAT, LOCK_EX);
        std::string data;
        if (::lseek(lock.fd(), 0, SEEK_END) == 0) data = std::string(kHeader) + "\n";
        data += format_row(k, n, value, witness) + "\n";
        write_all(lock.fd(), data, *path_);
    }
    entries_.insert_or_assign({k, n}, CacheEntry{k, n, value, witness});
}

std::size_t ExactCache::size() const {
    std::shared_lock guard(mutex_);
    return entries_.size();
}

std::vector<std::string> ExactCache::warnings() const {
    std::shared_lock guard(mutex_);
    return warnings_;
}

}  // namespace apfree
