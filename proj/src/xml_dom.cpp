// SPDX-License-Identifier: Apache-2.0
#include "xml_dom.hpp"

#include <expat.h>

#include <memory>

#include "doctowers/error.hpp"

namespace doctowers::xml {

std::string_view local_name(std::string_view qualified) noexcept {
  const auto colon = qualified.rfind(':');
  return colon == std::string_view::npos ? qualified : qualified.substr(colon + 1);
}

std::optional<std::string_view> Node::attr(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (local_name(k) == name) return std::string_view(v);
  }
  return std::nullopt;
}

const Node* Node::child(std::string_view name) const {
  for (const Node& c : children) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<const Node*> Node::children_named(std::string_view name) const {
  std::vector<const Node*> out;
  for (const Node& c : children) {
    if (c.name == name) out.push_back(&c);
  }
  return out;
}

namespace {

struct Builder {
  XML_Parser parser = nullptr;
  Node root;
  bool have_root = false;
  std::vector<Node*> stack;

  static void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
    auto* self = static_cast<Builder*>(data);
    Node node;
    node.name = std::string(local_name(name));
    node.line = XML_GetCurrentLineNumber(self->parser);
    for (std::size_t i = 0; atts[i] != nullptr; i += 2) {
      node.attributes.emplace_back(atts[i], atts[i + 1]);
    }
    if (self->stack.empty()) {
      self->root = std::move(node);
      self->have_root = true;
      self->stack.push_back(&self->root);
    } else {
      Node* parent = self->stack.back();
      parent->children.push_back(std::move(node));
      self->stack.push_back(&parent->children.back());
    }
  }

  static void on_end(void* data, const XML_Char*) {
    static_cast<Builder*>(data)->stack.pop_back();
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<Builder*>(data);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

struct ParserDeleter {
  void operator()(XML_ParserStruct* p) const noexcept { XML_ParserFree(p); }
};

}  // namespace

Node parse(std::string_view bytes) {
  std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate(nullptr));
  if (!parser) throw Error(ErrorKind::MalformedXml, "cannot allocate XML parser");
  Builder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);

  // Feed in chunks so inputs larger than INT_MAX are still accepted.
  constexpr std::size_t kChunk = 1 << 24;
  std::size_t offset = 0;
  do {
    const std::size_t len = std::min(kChunk, bytes.size() - offset);
    const bool last = offset + len == bytes.size();
    if (XML_Parse(parser.get(), bytes.data() + offset, static_cast<int>(len), last) ==
        XML_STATUS_ERROR) {
      throw Error(ErrorKind::MalformedXml,
                  "line " + std::to_string(XML_GetCurrentLineNumber(parser.get())) + ", column " +
                      std::to_string(XML_GetCurrentColumnNumber(parser.get())) + ": " +
                      XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    offset += len;
  } while (offset < bytes.size());
  if (!builder.have_root) throw Error(ErrorKind::MalformedXml, "document has no root element");
  return std::move(builder.root);
}

}  // namespace doctowers::xml
