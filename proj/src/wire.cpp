#include "sgm/wire.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <utility>

namespace sgm {

namespace {

std::string errno_text() { return std::strerror(errno); }

void wait_readable(int fd, int timeout_ms) {
    pollfd pfd{fd, POLLIN, 0};
    const int rv = ::poll(&pfd, 1, timeout_ms);
    if (rv == 0) throw WireError(WireError::Kind::Timeout, "read timed out");
    if (rv < 0) throw WireError(WireError::Kind::IoError, "poll: " + errno_text());
}

} // namespace

Socket::~Socket() { close(); }

Socket::Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void Socket::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Socket Socket::connect(const std::string& host, std::uint16_t port, int timeout_ms) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    const int gai = ::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &results);
    if (gai != 0) {
        throw WireError(WireError::Kind::IoError,
                        "resolve " + host + ": " + ::gai_strerror(gai));
    }

    std::string last_error = "no addresses";
    for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        int rv = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rv < 0 && errno == EINPROGRESS) {
            pollfd pfd{fd, POLLOUT, 0};
            rv = ::poll(&pfd, 1, timeout_ms);
            if (rv > 0) {
                int err = 0;
                socklen_t len = sizeof(err);
                ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
                if (err == 0) {
                    rv = 0;
                } else {
                    errno = err;
                    rv = -1;
                }
            } else if (rv == 0) {
                errno = ETIMEDOUT;
                rv = -1;
            }
        }
        if (rv == 0) {
            // back to blocking; frame reads use poll for timeouts
            const int flags = ::fcntl(fd, F_GETFL, 0);
            ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
            ::freeaddrinfo(results);
            return Socket(fd);
        }
        last_error = errno_text();
        ::close(fd);
    }
    ::freeaddrinfo(results);
    throw WireError(WireError::Kind::IoError,
                    "connect " + host + ":" + std::to_string(port) + ": " + last_error);
}

void Socket::read_exact(void* buf, std::size_t n, int timeout_ms) {
    auto* p = static_cast<char*>(buf);
    while (n > 0) {
        wait_readable(fd_, timeout_ms);
        const ssize_t got = ::recv(fd_, p, n, 0);
        if (got == 0) throw WireError(WireError::Kind::Closed, "connection closed by peer");
        if (got < 0) {
            if (errno == EINTR) continue;
            throw WireError(WireError::Kind::IoError, "recv: " + errno_text());
        }
        p += got;
        n -= static_cast<std::size_t>(got);
    }
}

void Socket::write_all(const void* buf, std::size_t n) {
    const auto* p = static_cast<const char*>(buf);
    while (n > 0) {
        const ssize_t sent = ::send(fd_, p, n, MSG_NOSIGNAL);
        if (sent < 0) {
            if (errno == EINTR) continue;
            throw WireError(WireError::Kind::IoError, "send: " + errno_text());
        }
        p += sent;
        n -= static_cast<std::size_t>(sent);
    }
}

Listener::~Listener() { close(); }

Listener::Listener(Listener&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)), port_(std::exchange(other.port_, 0)) {}

Listener& Listener::operator=(Listener&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
        port_ = std::exchange(other.port_, 0);
    }
    return *this;
}

void Listener::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

Listener Listener::bind(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* results = nullptr;
    const int gai = ::getaddrinfo(host.empty() ? nullptr : host.c_str(),
                                  std::to_string(port).c_str(), &hints, &results);
    if (gai != 0) {
        throw WireError(WireError::Kind::IoError,
                        "resolve " + host + ": " + ::gai_strerror(gai));
    }

    std::string last_error = "no addresses";
    for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
        const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            last_error = errno_text();
            continue;
        }
        int one = 1;
        ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
            sockaddr_storage bound{};
            socklen_t len = sizeof(bound);
            ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
            Listener listener;
            listener.fd_ = fd;
            listener.port_ = bound.ss_family == AF_INET6
                                 ? ntohs(reinterpret_cast<sockaddr_in6&>(bound).sin6_port)
                                 : ntohs(reinterpret_cast<sockaddr_in&>(bound).sin_port);
            ::freeaddrinfo(results);
            return listener;
        }
        last_error = errno_text();
        ::close(fd);
    }
    ::freeaddrinfo(results);
    throw WireError(WireError::Kind::IoError,
                    "bind " + host + ":" + std::to_string(port) + ": " + last_error);
}

std::optional<Socket> Listener::accept(int poll_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    const int rv = ::poll(&pfd, 1, poll_ms);
    if (rv == 0) return std::nullopt;
    if (rv < 0) {
        if (errno == EINTR) return std::nullopt;
        throw WireError(WireError::Kind::IoError, "poll: " + errno_text());
    }
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw WireError(WireError::Kind::IoError, "accept: " + errno_text());
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return Socket(fd);
}

void write_frame(Socket& socket, std::string_view payload) {
    if (payload.size() > kMaxFramePayload) {
        throw WireError(WireError::Kind::Oversize,
                        "frame payload of " + std::to_string(payload.size()) +
                            " bytes exceeds the 64 MiB cap");
    }
    const auto n = static_cast<std::uint32_t>(payload.size());
    const std::array<unsigned char, 4> header = {
        static_cast<unsigned char>(n >> 24), static_cast<unsigned char>(n >> 16),
        static_cast<unsigned char>(n >> 8), static_cast<unsigned char>(n)};
    socket.write_all(header.data(), header.size());
    if (n > 0) socket.write_all(payload.data(), payload.size());
}

std::string read_frame(Socket& socket, int timeout_ms) {
    std::array<unsigned char, 4> header{};
    socket.read_exact(header.data(), header.size(), timeout_ms);
    const std::uint32_t n = (static_cast<std::uint32_t>(header[0]) << 24) |
                            (static_cast<std::uint32_t>(header[1]) << 16) |
                            (static_cast<std::uint32_t>(header[2]) << 8) |
                            static_cast<std::uint32_t>(header[3]);
    if (n > kMaxFramePayload) {
        throw WireError(WireError::Kind::Oversize,
                        "declared frame length " + std::to_string(n) + " exceeds the 64 MiB cap");
    }
    std::string payload(n, '\0');
    if (n > 0) socket.read_exact(payload.data(), n, timeout_ms);
    return payload;
}

} // namespace sgm
