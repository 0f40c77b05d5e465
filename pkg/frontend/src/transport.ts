/** Browser WebSocket transport wired to a SessionClient. */

import { SessionClient, Transport } from "./client";

export function connect(client: SessionClient, url?: string): Transport {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  const target = url ?? `${proto}://${location.host}/session`;
  const ws = new WebSocket(target);
  const transport: Transport = {
    send: (data) => ws.send(data),
    close: () => ws.close(),
  };
  client.attach(transport);
  ws.onmessage = (ev) => client.handleMessage(String(ev.data));
  ws.onclose = () => client.handleClose();
  ws.onopen = () => client.requestLoad();
  return transport;
}
