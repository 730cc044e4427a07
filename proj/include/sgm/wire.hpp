#ifndef SGM_WIRE_HPP
#define SGM_WIRE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sgm {

// Every message is one frame: 4-byte big-endian payload length, then the
// payload. Oversized or truncated frames raise WireError.
inline constexpr std::size_t kMaxFramePayload = 64ull << 20; // 64 MiB

class WireError : public std::runtime_error {
public:
    enum class Kind { Closed, Timeout, Oversize, IoError };

    WireError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket();

    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;

    static Socket connect(const std::string& host, std::uint16_t port, int timeout_ms);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }
    void close();

    // timeout_ms < 0 blocks indefinitely.
    void read_exact(void* buf, std::size_t n, int timeout_ms);
    void write_all(const void* buf, std::size_t n);

private:
    int fd_ = -1;
};

class Listener {
public:
    Listener() = default;
    ~Listener();

    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;
    Listener(Listener&& other) noexcept;
    Listener& operator=(Listener&& other) noexcept;

    // Throws WireError(IoError) if the port cannot be bound.
    static Listener bind(const std::string& host, std::uint16_t port);

    // Returns nullopt if no connection arrived within poll_ms.
    std::optional<Socket> accept(int poll_ms);

    bool valid() const { return fd_ >= 0; }
    std::uint16_t port() const { return port_; }
    void close();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

void write_frame(Socket& socket, std::string_view payload);
std::string read_frame(Socket& socket, int timeout_ms = -1);

} // namespace sgm

#endif
