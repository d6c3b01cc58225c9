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

#include "imagine/paradigm.h"

#include <stdexcept>

#include "gtest/gtest.h"

namespace imagine {
namespace {

EnvConfig WithParadigm(Paradigm paradigm, int n) {
  EnvConfig config;
  config.paradigm = paradigm;
  config.n_agents = n;
  return config;
}

TEST(ParadigmTest, CtceConcatenates) {
  const EnvConfig config = WithParadigm(Paradigm::kCtce, 3);
  const int d = ObservationDim(config);
  EXPECT_EQ(ActorStreamCount(config), 1);
  EXPECT_EQ(ActorObservationDim(config), 3 * d);
  EXPECT_EQ(ActorActionDim(config), 3 * 2);

  Environment env(config);
  const auto obs = env.Reset(3);
  const ParadigmView view = WrapObservations(env, obs);
  ASSERT_EQ(view.actor.size(), 1u);
  ASSERT_EQ(static_cast<int>(view.actor[0].size()), 3 * d);
  for (int i = 0; i < 3; ++i) {
    const auto local = obs[i].Flatten();
    EXPECT_TRUE(std::equal(local.begin(), local.end(), view.actor[0].begin() + i * d));
  }
  EXPECT_FALSE(view.critic.has_value());
}

TEST(ParadigmTest, CtceSplitsJointAction) {
  const EnvConfig config = WithParadigm(Paradigm::kCtce, 2);
  const std::vector<std::vector<double>> joint = {{0.1, 0.2, 0.3, 0.4}};
  const auto commands = UnwrapActions(config, joint);
  ASSERT_EQ(commands.size(), 2u);
  EXPECT_DOUBLE_EQ(commands[1][0], 0.3);
  EXPECT_DOUBLE_EQ(commands[1][1], 0.4);
  const std::vector<std::vector<double>> short_joint = {{0.1, 0.2, 0.3}};
  EXPECT_THROW(UnwrapActions(config, short_joint), std::invalid_argument);
}

TEST(ParadigmTest, DtdeHasNoCritic) {
  const EnvConfig config = WithParadigm(Paradigm::kDtde, 2);
  Environment env(config);
  const auto obs = env.Reset(0);
  const ParadigmView view = WrapObservations(env, obs);
  EXPECT_EQ(view.actor.size(), 2u);
  EXPECT_FALSE(view.critic.has_value());
  const std::vector<std::vector<double>> one = {{0, 0}};
  EXPECT_THROW(UnwrapActions(config, one), std::invalid_argument);
}

TEST(ParadigmTest, CtdeActorsMatchDtde) {
  Environment dtde(WithParadigm(Paradigm::kDtde, 3));
  Environment ctde(WithParadigm(Paradigm::kCtde, 3));
  const auto od = dtde.Reset(8);
  const auto oc = ctde.Reset(8);
  const ParadigmView vd = WrapObservations(dtde, od);
  const ParadigmView vc = WrapObservations(ctde, oc);
  EXPECT_EQ(vd.actor, vc.actor);
  ASSERT_TRUE(vc.critic.has_value());
  EXPECT_EQ(static_cast<int>(vc.critic->size()), CriticStateDim(ctde.config()));
  EXPECT_EQ(CriticStateDim(ctde.config()), 19);
  EXPECT_EQ(vc.critic->back(), ctde.coverage());
}

TEST(ParadigmTest, SingleAgentParadigmsAgree) {
  for (Paradigm p : {Paradigm::kCtce, Paradigm::kCtde}) {
    Environment a(WithParadigm(Paradigm::kDtde, 1));
    Environment b(WithParadigm(p, 1));
    EXPECT_EQ(WrapObservations(a, a.Reset(2)).actor, WrapObservations(b, b.Reset(2)).actor);
  }
}

}  // namespace
}  // namespace imagine
