/*
 * Copyright 2026 The Imagine Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef IMAGINE_HARNESS_WIRE_H_
#define IMAGINE_HARNESS_WIRE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace imagine::harness {

// Frames are a 4-byte big-endian payload length followed by the payload
// (UTF-8 JSON in practice).
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

std::string EncodeFrame(std::string_view payload);
std::uint32_t DecodeFrameLength(const unsigned char header[4]);

// Owning wrapper around a POSIX socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept : fd_(other.Release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int Release();
  void Close();

 private:
  int fd_ = -1;
};

// Binds and listens on address:port; port 0 picks an ephemeral port. Throws
// std::invalid_argument for a malformed IPv4 address and std::system_error
// on socket failure.
Socket ListenTcp(const std::string& address, std::uint16_t port);
std::uint16_t LocalPort(const Socket& socket);
Socket AcceptClient(const Socket& listener);
Socket ConnectTcp(const std::string& address, std::uint16_t port);

// Throws std::system_error on I/O failure.
void WriteFrame(const Socket& socket, std::string_view payload);
// std::nullopt on a clean end of stream before a header; throws
// std::runtime_error on a truncated or oversized frame.
std::optional<std::string> ReadFrame(const Socket& socket);

}  // namespace imagine::harness

#endif  // IMAGINE_HARNESS_WIRE_H_
