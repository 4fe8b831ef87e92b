/** Tiny DOM helpers; no framework, no templating. */

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

/** Full-precision numeric text: what the API sent is what the DOM shows. */
export function numberText(value: number): string {
  return String(value);
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) node.removeChild(node.firstChild);
}

export function banner(message: string): HTMLElement {
  return el("div", { class: "banner error", role: "alert" }, [message]);
}

export function staleBadge(): HTMLElement {
  return el("span", { class: "stale-badge", "data-testid": "stale" }, ["stale"]);
}
