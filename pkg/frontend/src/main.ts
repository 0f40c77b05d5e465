/** Browser entry: mount the console, wire the command bar. */

import { SessionClient } from "./client";
import { render, toDom } from "./render";
import { connect } from "./transport";
import { complete, SHORTCUTS } from "./vocabulary";

function mount(): void {
  const root = document.getElementById("root");
  const input = document.getElementById("command") as HTMLInputElement;
  const sendButton = document.getElementById("send") as HTMLButtonElement;
  const suggestions = document.getElementById("suggestions") as HTMLDataListElement;
  const shortcuts = document.getElementById("shortcuts");
  if (!root || !input || !sendButton || !suggestions || !shortcuts) return;

  const client = new SessionClient();

  const redraw = () => {
    root.replaceChildren(toDom(render(client.state), document));
    input.disabled = !client.inputEnabled;
    sendButton.disabled = !client.inputEnabled;
  };
  client.onChange(redraw);

  const submit = (text: string) => {
    if (client.sendCommand(text)) {
      input.value = "";
    }
  };
  sendButton.addEventListener("click", () => submit(input.value));
  input.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") submit(input.value);
  });
  input.addEventListener("input", () => {
    suggestions.replaceChildren(
      ...complete(input.value).map((cmd) => {
        const option = document.createElement("option");
        option.value = cmd;
        return option;
      }),
    );
  });
  for (const cmd of SHORTCUTS) {
    const button = document.createElement("button");
    button.textContent = cmd;
    button.className = "shortcut";
    button.addEventListener("click", () => submit(cmd));
    shortcuts.appendChild(button);
  }
  window.addEventListener("beforeunload", () => client.end());

  connect(client);
  redraw();
}

mount();
