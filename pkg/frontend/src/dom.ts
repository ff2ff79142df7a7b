// Tiny DOM helpers; no framework.

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function textInput(id: string, placeholder: string, value = ""): HTMLInputElement {
  const input = el("input", { id, placeholder, type: "text" });
  input.value = value;
  return input;
}

export function errorPanel(code: string, message: string): HTMLElement {
  return el("div", { class: "panel error", "data-code": code }, [`${code}: ${message}`]);
}

export function emptyPanel(message: string): HTMLElement {
  return el("div", { class: "panel empty" }, [message]);
}
