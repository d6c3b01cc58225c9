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

#include "imagine/harness/wire.h"

#include <sys/socket.h>

#include <stdexcept>
#include <string>
#include <thread>

#include "gtest/gtest.h"

namespace imagine::harness {
namespace {

TEST(WireTest, EncodesBigEndianLength) {
  const std::string frame = EncodeFrame("{\"cmd\":\"close\"}");
  ASSERT_EQ(frame.size(), 4u + 15u);
  EXPECT_EQ(frame.substr(0, 4), std::string("\0\0\0\x0f", 4));
  EXPECT_EQ(frame.substr(4), "{\"cmd\":\"close\"}");
  const std::string big = EncodeFrame(std::string(0x010203, 'x'));
  EXPECT_EQ(big.substr(0, 4), std::string("\0\x01\x02\x03", 4));
  const unsigned char header[4] = {0x12, 0x34, 0x56, 0x78};
  EXPECT_EQ(DecodeFrameLength(header), 0x12345678u);
}

// A connected loopback pair.
struct Pair {
  Socket server;
  Socket client;
};

Pair Connect() {
  Socket listener = ListenTcp("127.0.0.1", 0);
  const std::uint16_t port = LocalPort(listener);
  Pair pair;
  std::thread accept([&] { pair.server = AcceptClient(listener); });
  pair.client = ConnectTcp("127.0.0.1", port);
  accept.join();
  return pair;
}

TEST(WireTest, FramesSurviveLoopback) {
  Pair pair = Connect();
  WriteFrame(pair.client, "hello");
  WriteFrame(pair.client, "");
  const std::string large(1 << 20, 'z');
  std::thread writer([&] { WriteFrame(pair.client, large); });
  EXPECT_EQ(ReadFrame(pair.server), "hello");
  EXPECT_EQ(ReadFrame(pair.server), "");
  EXPECT_EQ(ReadFrame(pair.server), large);
  writer.join();
  pair.client.Close();
  EXPECT_EQ(ReadFrame(pair.server), std::nullopt);
}

TEST(WireTest, TruncatedFrameThrows) {
  Pair pair = Connect();
  const std::string partial = EncodeFrame("abcdef").substr(0, 7);
  ASSERT_EQ(::send(pair.client.fd(), partial.data(), partial.size(), 0),
            static_cast<ssize_t>(partial.size()));
  pair.client.Close();
  EXPECT_THROW(ReadFrame(pair.server), std::runtime_error);
}

TEST(WireTest, TruncatedHeaderThrows) {
  Pair pair = Connect();
  ASSERT_EQ(::send(pair.client.fd(), "\0\0", 2, 0), 2);
  pair.client.Close();
  EXPECT_THROW(ReadFrame(pair.server), std::runtime_error);
}

TEST(WireTest, OversizedFrameThrows) {
  Pair pair = Connect();
  const unsigned char header[4] = {0x7f, 0xff, 0xff, 0xff};
  ASSERT_EQ(::send(pair.client.fd(), header, 4, 0), 4);
  EXPECT_THROW(ReadFrame(pair.server), std::runtime_error);
}

TEST(WireTest, BindConflictThrows) {
  Socket first = ListenTcp("127.0.0.1", 0);
  EXPECT_THROW(ListenTcp("127.0.0.1", LocalPort(first)), std::system_error);
  EXPECT_THROW(ListenTcp("not-an-address", 0), std::invalid_argument);
}

}  // namespace
}  // namespace imagine::harness
