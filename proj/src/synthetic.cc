//
// Copyright 2026 The Dialogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dialogic/synthetic.h"

#include <cmath>
#include <cstdio>

#include "dialogic/utf8.h"

namespace dialogic {

TemplateSet builtin_templates() {
  TemplateSet t;
  t[category_index(Category::kGreeting)] = {
      "{同学们|小朋友们|大家}{好|早上好|下午好|晚上好}{|，欢迎来到今天的课堂|，我们准备上课了|，今天老师和大家一起学习}",
      "{欢迎|欢迎大家}来到{今天的|我们的|老师的}{课堂|直播课|数学课}{|，大家好}",
      "{嗨|哈喽|你好}，{同学们|大家|小朋友}{能听到老师的声音吗|都到齐了吗|准备好了吗|今天过得好吗}",
      "{新的一周|新学期|今天}{又见面了|开始了}{，|}{大家好|同学们好}",
  };
  t[category_index(Category::kCommending)] = {
      "{非常|真|特别}{好|棒|不错}{|，你答对了|，继续保持|，就是这样做}",
      "{回答得|做得|说得|想得}{非常|特别|真}{好|棒|准确|清楚}{|，大家给他点个赞|，老师很满意}",
      "{你|这位同学|小明}{真厉害|太聪明了|进步很大|这道题做对了}{|，老师为你骄傲|，继续加油}",
      "{这个方法|你的思路|这个答案}{很好|很巧妙|完全正确}{，|}{大家|同学们}{要向他学习|鼓鼓掌}",
  };
  t[category_index(Category::kGuidance)] = {
      "{我们|大家}{先|再}{想一想|看一看|思考一下}{这道题|这个问题|题目}{的条件|要求的是什么|怎么做}",
      "{你可以|试着|我们可以}从{已知条件|图形|这一步|第一句话}{入手|开始想|找突破口}",
      "{注意|提示一下|想一下}，{这道题|这个问题}{关键在于|要先|可以}{找规律|画图|列方程|找等量关系}",
      "{如果|假如}{我们|大家}{把它|把这个数}{拆开|换一下|画出来}{，会发现什么|，能不能做出来|，怎么办}",
  };
  t[category_index(Category::kExampleGiving)] = {
      "{比如说|举个例子|例如}{，|}{我们|老师|小明}{买了三个苹果|有五支铅笔|画了一个三角形|走了两公里}",
      "{就像|好比}{生活中|我们平时}{分蛋糕|排队|买东西|坐公交车}一样",
      "{我们|大家}来看{一个|这个}例子{，|：}{小明有十颗糖|一辆车每小时走六十公里|一个班有四十个人}",
      "{打个比方|比方说}{，|}{这道题|这个问题}{就像|好比}{分苹果|搭积木|走楼梯}",
  };
  t[category_index(Category::kRepeating)] = {
      "{我再说一遍|老师再重复一次|再强调一遍}{，|}{这道题|这个公式|这个知识点}{很重要|要记住|一定要会}",
      "{跟着老师|大家一起}{读一遍|再说一遍|重复一下}{这个公式|这句话|答案|这个知识点}",
      "{重要的事情说三遍|再说一次|再讲一遍}{，|}{一定要|千万要}{检查单位|看清题目|写答句}",
      "{没听清的同学|刚才没听懂的}{，|}{老师再讲一遍|我们再来一次|再听一遍}",
  };
  t[category_index(Category::kReviewing)] = {
      "{我们|大家}{先|一起}{回顾一下|复习一下}{上节课|昨天|之前}{学的|讲的}{内容|知识点|公式}",
      "{还记得|谁还记得}{上节课|昨天}{我们|老师}{讲的|学的}{什么|那道题|公式}吗",
      "{上次|之前}{我们|老师}{讲过|学过}{这个知识点|这种题型}{，大家还有印象吗|，我们复习一下}",
      "{先|我们先}{复习|回忆}一下{上节课的|之前学的}{公式|方法|内容}{，再|，然后}{讲新课|做练习}",
  };
  t[category_index(Category::kNoteTaking)] = {
      "{请|大家}{拿出|准备好}{笔记本|本子|纸和笔}{，|}{把这个|把这道题|把公式}{记下来|抄下来}",
      "{这个|这道题|这个公式}{很重要|是重点}{，|}{大家|请}{记在笔记上|做好笔记|写下来}",
      "{请大家|同学们}{做好笔记|记笔记|把重点记一下|在本子上写一下}",
      "{把|请把}{这个知识点|老师写的|这个方法}{记到|抄到|写到}{笔记本上|本子上|错题本上}",
  };
  t[category_index(Category::kSummarization)] = {
      "{我们|大家}{来|一起}{总结一下|归纳一下}{今天|这节课|这道题}{学的|讲的}{内容|方法|知识点}",
      "{总的来说|总之|最后总结一下}{，|}{这类题|今天的内容}{关键是|分为|要记住}{三步|两点|一个方法}",
      "{今天|这节课}{我们|大家}{学会了|掌握了|学习了}{什么|哪些方法|这些知识}",
      "{通过|经过}{这节课|今天的学习}{，|}{我们知道了|大家学会了}{这个公式|这类题的做法|两个方法}",
  };
  t[category_index(Category::kOthers)] = {
      "{好的|嗯|那个}{，|}{我们|大家}{看一下|等一下|稍等}{屏幕|课件|网络}",
      "{能看到|看得清|听得清}{老师的|}{屏幕|课件|声音}吗",
      "{这道题|今天的作业|下一页}{是|在}{第三页|课本上|后面}",
      "{那个|嗯|然后}{我们|老师}{开始|继续|接着}{讲|说}{下一题|下面的内容}",
  };
  return t;
}

std::string instantiate_template(std::string_view pattern, Rng& rng) {
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    const char c = pattern[i];
    if (c == '}') throw ConfigError("templates", "unbalanced '}' in template");
    if (c != '{') {
      out.push_back(c);
      ++i;
      continue;
    }
    const std::size_t close = pattern.find('}', i + 1);
    if (close == std::string_view::npos) {
      throw ConfigError("templates", "unbalanced '{' in template");
    }
    std::string_view group = pattern.substr(i + 1, close - i - 1);
    if (group.find('{') != std::string_view::npos) {
      throw ConfigError("templates", "nested alternation group in template");
    }
    std::vector<std::string_view> alternatives;
    std::size_t start = 0;
    while (true) {
      const std::size_t bar = group.find('|', start);
      alternatives.push_back(group.substr(start, bar - start));
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    out += alternatives[rng.uniform_index(alternatives.size())];
    i = close + 1;
  }
  return out;
}

void SplitFractions::validate() const {
  const double parts[] = {train, validation, test};
  const char* names[] = {"train", "validation", "test"};
  for (int i = 0; i < 3; ++i) {
    if (!(parts[i] >= 0.0 && parts[i] <= 1.0)) {
      throw ConfigError(std::string("splits.") + names[i], "must lie in [0, 1]");
    }
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw ConfigError("splits", "fractions must sum to 1");
  }
}

double SyntheticCorpus::realized_cer() const {
  std::vector<std::string> noisy;
  noisy.reserve(examples.size());
  for (const auto& ex : examples) noisy.push_back(ex.text);
  return character_error_rate(clean_texts, noisy);
}

SyntheticCorpus generate_synthetic_corpus(std::size_t n_per_class,
                                          const TemplateSet& templates,
                                          const NoiseSpec& noise,
                                          std::uint64_t rng_seed,
                                          const SplitFractions& splits) {
  if (n_per_class == 0) throw ConfigError("corpus.n_per_class", "must be positive");
  for (Category c : all_categories()) {
    if (templates[category_index(c)].empty()) {
      throw ConfigError("corpus.templates." + std::string(category_name(c)),
                        "category has no templates");
    }
  }
  noise.validate();
  splits.validate();

  Rng template_rng(rng_seed);
  Rng split_rng(derive_seed(rng_seed, 1));
  Rng noise_rng(noise.rng_seed);

  SyntheticCorpus corpus;
  corpus.clean_texts.reserve(n_per_class * kNumCategories);
  for (Category c : all_categories()) {
    const auto& patterns = templates[category_index(c)];
    for (std::size_t i = 0; i < n_per_class; ++i) {
      std::string text;
      do {
        text = instantiate_template(patterns[template_rng.uniform_index(patterns.size())],
                                    template_rng);
      } while (trim(utf8_decode(text)).empty() && patterns.size() > 1);
      if (trim(utf8_decode(text)).empty()) {
        throw ConfigError("corpus.templates." + std::string(category_name(c)),
                          "templates only produce blank text");
      }
      corpus.clean_texts.push_back(std::move(text));
    }
  }

  const std::vector<char32_t> inventory = character_inventory(corpus.clean_texts);

  const auto n_train = static_cast<std::size_t>(std::floor(n_per_class * splits.train + 0.5));
  const auto n_val = std::min(
      n_per_class - std::min(n_train, n_per_class),
      static_cast<std::size_t>(std::floor(n_per_class * splits.validation + 0.5)));

  corpus.examples.reserve(corpus.clean_texts.size());
  for (Category c : all_categories()) {
    std::vector<std::size_t> order(n_per_class);
    for (std::size_t i = 0; i < n_per_class; ++i) order[i] = i;
    split_rng.shuffle(order);
    std::vector<Split> assignment(n_per_class, Split::kTest);
    for (std::size_t r = 0; r < n_per_class; ++r) {
      if (r < n_train) {
        assignment[order[r]] = Split::kTrain;
      } else if (r < n_train + n_val) {
        assignment[order[r]] = Split::kValidation;
      }
    }

    for (std::size_t i = 0; i < n_per_class; ++i) {
      const std::string& clean = corpus.clean_texts[category_index(c) * n_per_class + i];
      std::u32string noisy = apply_asr_noise(utf8_decode(clean), noise, inventory, noise_rng);
      if (trim(noisy).empty()) noisy = utf8_decode(clean);

      char uid[64];
      std::snprintf(uid, sizeof(uid), "syn-%s-%06zu",
                    std::string(category_name(c)).c_str(), i);
      corpus.examples.push_back(
          LabeledExample{uid, utf8_encode(noisy), c, assignment[i]});
    }
  }
  return corpus;
}

}  // namespace dialogic
