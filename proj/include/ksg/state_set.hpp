/*
 * Copyright 2026 The ksg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KSG_STATE_SET_HPP
#define KSG_STATE_SET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace ksg {

/// Fixed-universe bitmask over dense state indices. Used for knowledges
/// (subsets of arena states) and beliefs (subsets of 1½-player game states).
class StateSet
{
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : size_(universe), words_((universe + 63) / 64, 0) { }

    static StateSet singleton(std::size_t universe, std::size_t s)
    {
        StateSet r(universe);
        r.insert(s);
        return r;
    }

    std::size_t universe() const { return size_; }

    void insert(std::size_t s) { words_[s / 64] |= (std::uint64_t{1} << (s % 64)); }
    void erase(std::size_t s) { words_[s / 64] &= ~(std::uint64_t{1} << (s % 64)); }
    bool contains(std::size_t s) const { return (words_[s / 64] >> (s % 64)) & 1U; }

    bool empty() const
    {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    StateSet &operator|=(const StateSet &o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    StateSet &operator&=(const StateSet &o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    friend StateSet operator|(StateSet a, const StateSet &b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet &b) { return a &= b; }

    bool subset_of(const StateSet &o) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const StateSet &o) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    /// Members in ascending order.
    std::vector<std::size_t> members() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto w = words_[i];
            while (w) {
                out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
                w &= w - 1;
            }
        }
        return out;
    }

    friend bool operator==(const StateSet &, const StateSet &) = default;
    friend auto operator<=>(const StateSet &a, const StateSet &b)
    {
        return a.words_ <=> b.words_;
    }

    std::size_t hash() const
    {
        std::size_t h = 0x9e3779b97f4a7c15ULL ^ size_;
        for (auto w : words_) h = (h ^ w) * 0x100000001b3ULL + (h >> 29);
        return h;
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateSetHash
{
    std::size_t operator()(const StateSet &s) const { return s.hash(); }
};

}

#endif
