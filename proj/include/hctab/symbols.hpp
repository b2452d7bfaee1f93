#pragma once

#include <cassert>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hctab/cells.hpp"

namespace hctab {

struct Symbol {
    std::string name;
    std::uint32_t arity;
};

// Interns (name, arity) pairs: one id per distinct pair.
class SymbolTable {
public:
    SymbolTable() { nil_ = intern("[]", 0); }

    SymbolId intern(std::string_view name, std::uint32_t arity) {
        Key key{std::string(name), arity};
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        SymbolId id = static_cast<SymbolId>(symbols_.size());
        symbols_.push_back(Symbol{key.name, arity});
        ids_.emplace(std::move(key), id);
        return id;
    }

    const Symbol& at(SymbolId id) const {
        assert(id < symbols_.size());
        return symbols_[id];
    }

    SymbolId nil() const { return nil_; }
    std::size_t size() const { return symbols_.size(); }

private:
    struct Key {
        std::string name;
        std::uint32_t arity;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return std::hash<std::string>{}(k.name) * 31u + k.arity;
        }
    };

    std::vector<Symbol> symbols_;
    std::unordered_map<Key, SymbolId, KeyHash> ids_;
    SymbolId nil_;
};

}  // namespace hctab
