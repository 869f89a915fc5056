var oe=Object.defineProperty;var ie=(e,t,s)=>t in e?oe(e,t,{enumerable:!0,configurable:!0,writable:!0,value:s}):e[t]=s;var b=(e,t,s)=>ie(e,typeof t!="symbol"?t+"":t,s);(function(){const t=document.createElement("link").relList;if(t&&t.supports&&t.supports("modulepreload"))return;for(const o of document.querySelectorAll('link[rel="modulepreload"]'))n(o);new MutationObserver(o=>{for(const i of o)if(i.type==="childList")for(const r of i.addedNodes)r.tagName==="LINK"&&r.rel==="modulepreload"&&n(r)}).observe(document,{childList:!0,subtree:!0});function s(o){const i={};return o.integrity&&(i.integrity=o.integrity),o.referrerPolicy&&(i.referrerPolicy=o.referrerPolicy),o.crossOrigin==="use-credentials"?i.credentials="include":o.crossOrigin==="anonymous"?i.credentials="omit":i.credentials="same-origin",i}function n(o){if(o.ep)return;o.ep=!0;const i=s(o);fetch(o.href,i)}})();class I extends Error{constructor(s,n){super(`service error ${s}: ${n}`);b(this,"status");b(this,"detail");this.name="ApiError",this.status=s,this.detail=n}}class ce{constructor(t="",s=fetch){b(this,"baseUrl");b(this,"fetchImpl");this.baseUrl=t.replace(/\/$/,""),this.fetchImpl=s}async request(t,s,n){const o={method:t,headers:{}};n!==void 0&&(o.headers={"content-type":"application/json"},o.body=JSON.stringify(n));let i;try{i=await this.fetchImpl(this.baseUrl+s,o)}catch(r){throw new I(0,`service unreachable: ${String(r)}`)}if(!i.ok){let r=i.statusText;try{const c=await i.json();c&&typeof c.detail=="string"&&(r=c.detail)}catch{}throw new I(i.status,r)}return await i.json()}createSession(t,s,n){const o={robot:t,task:s};return n!==void 0&&(o.config=n),this.request("POST","/sessions",o)}getScene(t){return this.request("GET",`/sessions/${t}/scene`)}getProgress(t){return this.request("GET",`/sessions/${t}/progress`)}planGrasps(t,s=0,n=1){return this.request("POST",`/sessions/${t}/grasps`,{seed:s,jobs:n})}getGrasps(t){return this.request("GET",`/sessions/${t}/grasps`)}selectGrasp(t,s,n){return this.request("POST",`/sessions/${t}/select`,{index:s,revision:n})}updateObject(t,s){return this.request("POST",`/sessions/${t}/object`,{object:s})}applyRoi(t,s,n){return this.request("POST",`/sessions/${t}/roi`,{cloud:s,box:n})}getTask(t){return this.request("GET",`/sessions/${t}/task`)}}const ae=3,le=["+x","-x","+y","-y","+z","-z"],$=.001;function de(){return{active:!1,box:{center:[.5,0,.3],halfExtents:[.1,.1,.1]}}}function D(e){return{x:0,y:1,z:2}[e[1]]}function G(e){return e[0]==="+"?1:-1}function U(e,t){const s=D(t),n=[...e.center];return n[s]+=G(t)*e.halfExtents[s],n}function ue(e,t,s){const n=D(t),o=G(t);let i=e.halfExtents[n]+s/2,r=s;i<$&&(r=($-e.halfExtents[n])*2,i=$);const c=[...e.center];c[n]+=o*r/2;const a=[...e.halfExtents];return a[n]=i,{center:c,halfExtents:a}}function he(e,t,s){const n=[...e.center];return n[t]=s,{center:n,halfExtents:[...e.halfExtents]}}function pe(e,t,s){const n=[...e.halfExtents];return n[t]=Math.max(Math.abs(s),$),{center:[...e.center],halfExtents:n}}function fe(e){return e.toFixed(ae)}function ge(e){const t=Number(e);return Number.isFinite(t)?t:null}function xe(e){return{pose:{xyz:[...e.center],quat:[0,0,0,1]},half_extents:[...e.halfExtents]}}function W(e){const[t,s,n]=e.center,[o,i,r]=e.halfExtents,c=(l,d,p)=>[t+l*o,s+d*i,n+p*r],a=[];for(const l of[-1,1])for(const d of[-1,1])a.push([c(-1,l,d),c(1,l,d)]),a.push([c(l,-1,d),c(l,1,d)]),a.push([c(l,d,-1),c(l,d,1)]);return a}const ye=150;class be{constructor(t,s,n=ye){b(this,"client");b(this,"store");b(this,"progressPollMs");this.client=t,this.store=s,this.progressPollMs=n}sessionId(){const t=this.store.get().sessionId;if(!t)throw new Error("no session open");return t}acquire(){return this.store.get().pending?!1:(this.store.patch({pending:!0}),!0)}release(){this.store.patch({pending:!1,progress:null})}async openSession(t,s,n){if(!this.acquire())return"suppressed";try{const o=await this.client.createSession(t,s,n);return this.store.patch({sessionId:o.id,cursor:0}),await this.refreshScene(),"done"}catch(o){return this.bannerFor(o),"error"}finally{this.release()}}async joinSession(t){if(!this.acquire())return"suppressed";try{const s=await this.client.getScene(t);return this.store.patch({sessionId:t,cursor:0}),this.store.setBundle(s),"done"}catch(s){return this.bannerFor(s),"error"}finally{this.release()}}async refreshScene(){const t=await this.client.getScene(this.sessionId());this.store.setBundle(t)}async getGrasps(t=0,s=1){if(!this.acquire())return"suppressed";const n=this.sessionId(),o=this.startProgressPoll(n);try{const i=await this.client.planGrasps(n,t,s);return await this.refreshScene(),this.store.setCursor(0),i.count===0?(this.store.pushBanner("info","0 candidates"),"empty"):"done"}catch(i){return this.bannerFor(i),"error"}finally{clearInterval(o),this.release()}}scroll(t){this.store.setCursor(t)}async setWp(){const t=this.store.get();if(!t.bundle||t.bundle.candidates.length===0)return this.store.pushBanner("info","no candidates to select"),"error";if(!this.acquire())return"suppressed";try{return await this.client.selectGrasp(this.sessionId(),t.cursor,t.bundle.revision),await this.refreshScene(),"done"}catch(s){return s instanceof I&&s.status===409&&s.detail.includes("stale revision")?(this.store.patch({refreshPrompt:!0}),this.store.pushBanner("error",`${s.detail}; refresh the scene and retry`),"stale"):(this.bannerFor(s),"error")}finally{this.release()}}async updateObject(t){if(!this.acquire())return"suppressed";try{return await this.client.updateObject(this.sessionId(),t),await this.refreshScene(),this.store.setCursor(0),"done"}catch(s){return this.bannerFor(s),"error"}finally{this.release()}}async createMesh(t){if(!this.acquire())return"suppressed";try{const s=xe(this.store.get().roi.box);return await this.client.applyRoi(this.sessionId(),t,s),await this.refreshScene(),this.store.setCursor(0),"done"}catch(s){return this.bannerFor(s),"error"}finally{this.release()}}startProgressPoll(t){return setInterval(()=>{this.client.getProgress(t).then(s=>{this.store.get().pending&&this.store.patch({progress:s})}).catch(()=>{})},this.progressPollMs)}bannerFor(t){t instanceof I?this.store.pushBanner("error",t.detail):this.store.pushBanner("error",String(t))}}function me(){return{sessionId:null,bundle:null,cursor:0,mode:"compact-arrows",roi:de(),pending:!1,banners:[],refreshPrompt:!1,progress:null}}function K(e){return e.bundle?e.bundle.candidates.length:0}function ve(e,t){const s=K(e);return s===0?0:Math.min(Math.max(Math.floor(t),0),s-1)}class we{constructor(t=me()){b(this,"state");b(this,"listeners",[]);b(this,"bannerSeq",0);this.state=t}get(){return this.state}subscribe(t){return this.listeners.push(t),()=>{this.listeners=this.listeners.filter(s=>s!==t)}}patch(t){const s={...this.state,...t};s.cursor=ve(s,s.cursor),this.state=s;for(const n of[...this.listeners])n(s);return s}setBundle(t){return this.patch({bundle:t,refreshPrompt:!1})}setCursor(t){return this.patch({cursor:t})}setMode(t){return this.patch({mode:t})}pushBanner(t,s){const n={id:++this.bannerSeq,kind:t,text:s};return this.patch({banners:[...this.state.banners,n]}),n}dismissBanner(t){this.patch({banners:this.state.banners.filter(s=>s.id!==t)})}}function w(e,t){return[e[0]+t[0],e[1]+t[1],e[2]+t[2]]}function z(e,t){return[e[0]-t[0],e[1]-t[1],e[2]-t[2]]}function E(e,t){return[e[0]*t,e[1]*t,e[2]*t]}function q(e,t){return e[0]*t[0]+e[1]*t[1]+e[2]*t[2]}function j(e,t){return[e[1]*t[2]-e[2]*t[1],e[2]*t[0]-e[0]*t[2],e[0]*t[1]-e[1]*t[0]]}function Ee(e){return Math.sqrt(q(e,e))}function Y(e){const t=Ee(e);return t>1e-12?E(e,1/t):[0,0,0]}function Q(e,t){const s=[e[0],e[1],e[2]],n=e[3],o=E(j(s,t),2);return w(w(t,E(o,n)),j(s,o))}function P(e){return[e.xyz[0],e.xyz[1],e.xyz[2]]}function V(e){return[e.quat[0],e.quat[1],e.quat[2],e.quat[3]]}function B(e,t){return w(P(e),Q(V(e),t))}function _(e,t){const s=[0,0,0];return s[t]=1,Q(V(e),s)}function ke(){return{target:[.4,0,.3],yaw:-.7,pitch:.45,distance:1.6}}function k(e,t,s,n){const o=Math.cos(e.yaw),i=Math.sin(e.yaw),r=Math.cos(e.pitch),c=Math.sin(e.pitch),a=[o*r,i*r,c],l=w(e.target,E(a,e.distance)),d=Y(z(e.target,l)),p=Y(j(d,[0,0,1])),x=j(p,d),g=z(t,l),y=q(g,d),C=.9*Math.min(s,n)/Math.max(y,.05);return{x:s/2+q(g,p)*C,y:n/2-q(g,x)*C,depth:y}}const Z="tolerance_only",F=.04,Se=[.05,.05,.05];function Me(e,t){const s=e.vertices.map(i=>B(t,[i[0],i[1],i[2]])),n=new Set,o=[];for(const i of e.faces)for(let r=0;r<i.length;r++){const c=i[r],a=i[(r+1)%i.length],l=c<a?`${c}:${a}`:`${a}:${c}`;n.has(l)||(n.add(l),o.push([s[c],s[a]]))}return o}function X(e,t){return W({center:[0,0,0],halfExtents:t}).map(([n,o])=>[B(e,n),B(e,o)])}function J(e){return e.per_step_status.includes(Z)}function Le(e,t){const s=Math.max(t/2,.01),n=(o,i)=>B(e,[o,0,i]);return[[n(-s,-.035),n(s,-.035)],[n(-s,-.035),n(-s,0)],[n(s,-.035),n(s,0)],[n(0,-.035),n(0,-.035-.03)]]}function Pe(e){let t=0;for(const s of Object.values(e.finger_config))t+=Math.abs(s);return t}function ee(e){const t=e.bundle;if(!t)return[];const s=[],n=t.object.mesh;n&&n.vertices.length>0&&n.faces.length>0?s.push({kind:"object-mesh",edges:Me(n,t.object.pose)}):s.push({kind:"object-placeholder",edges:X(t.object.pose,Se)});const o=e.mode==="single-grasp"&&t.candidates.length>0?t.candidates[e.cursor]:null;if(t.steps.forEach((r,c)=>{const a=o!==null&&o.per_step_status[c]===Z,l=P(r.pose);s.push({kind:"step-frame",step:c,origin:l,axes:[w(l,E(_(r.pose,0),F)),w(l,E(_(r.pose,1),F)),w(l,E(_(r.pose,2),F))],tinted:a}),r.tol_pos.some(d=>d>0)&&s.push({kind:"step-tolbox",step:c,edges:X(r.pose,[Math.max(r.tol_pos[0],1e-4),Math.max(r.tol_pos[1],1e-4),Math.max(r.tol_pos[2],1e-4)]),tinted:a})}),e.mode==="compact-arrows")for(const r of t.candidates){const c=P(r.tcp_world),a=w(c,E(_(r.tcp_world,2),-.05));s.push({kind:"grasp-arrow",index:r.index,origin:c,tip:a,tinted:J(r),selected:t.selected===r.index})}else o&&s.push({kind:"hand-marker",index:o.index,origin:P(o.tcp_world),strokes:Le(o.tcp_world,Pe(o)),tinted:J(o),selected:t.selected===o.index});if(t.selected!==null&&e.mode==="single-grasp"){const r=t.candidates[t.selected];r&&s.push({kind:"selected-mark",index:r.index,position:P(r.tcp_world)})}if(e.roi.active){s.push({kind:"roi-box",edges:W(e.roi.box)});for(const r of le)s.push({kind:"roi-handle",handle:r,position:U(e.roi.box,r)})}const i=t.robot.joints.map(r=>[r.anchor[0],r.anchor[1],r.anchor[2]]);return i.length>0&&s.push({kind:"robot-skeleton",points:[...i,P(t.robot.tip)]}),s}const f={mesh:"#8a8a96",placeholder:"#b0606a",axes:["#d04040","#3faf4a","#4060d0"],tolbox:"#8878c8",grasp:"#2e9e4f",tinted:"#18a0b8",selected:"#e08a1e",roi:"#caa82e",handle:"#e0c040",skeleton:"#707078"};function M(e,t,s,n,o,i,r){for(const[c,a]of s){const l=k(t,c,i,r),d=k(t,a,i,r);e.push({depth:(l.depth+d.depth)/2,width:o,color:n,pts:[l,d]})}}function T(e,t,s,n,o,i,r){const c=k(t,s,i,r);e.push({depth:c.depth,width:1,color:n,fill:!0,pts:[{x:c.x-o,y:c.y-o},{x:c.x+o,y:c.y-o},{x:c.x+o,y:c.y+o},{x:c.x-o,y:c.y+o}]})}function Ce(e,t,s,n,o,i,r){const c=k(t,s,i,r),a=k(t,n,i,r);e.push({depth:(c.depth+a.depth)/2,width:2,color:o,pts:[c,a]});const l=a.x-c.x,d=a.y-c.y,p=Math.hypot(l,d)||1,x=l/p,g=d/p,y=6;e.push({depth:a.depth,width:2,color:o,pts:[{x:a.x-y*(x+.5*g),y:a.y-y*(g-.5*x)},{x:a.x,y:a.y},{x:a.x-y*(x-.5*g),y:a.y-y*(g+.5*x)}]})}function Oe(e,t,s,n,o){e.clearRect(0,0,n,o);const i=[];for(const r of t)switch(r.kind){case"object-mesh":M(i,s,r.edges,f.mesh,1,n,o);break;case"object-placeholder":M(i,s,r.edges,f.placeholder,1,n,o);break;case"step-frame":{for(let c=0;c<3;c++)M(i,s,[[r.origin,r.axes[c]]],r.tinted?f.tinted:f.axes[c],2,n,o);break}case"step-tolbox":M(i,s,r.edges,r.tinted?f.tinted:f.tolbox,1,n,o);break;case"grasp-arrow":{const c=r.selected?f.selected:r.tinted?f.tinted:f.grasp;Ce(i,s,r.origin,r.tip,c,n,o);break}case"hand-marker":{const c=r.selected?f.selected:r.tinted?f.tinted:f.grasp;M(i,s,r.strokes,c,3,n,o);break}case"selected-mark":T(i,s,r.position,f.selected,4,n,o);break;case"roi-box":M(i,s,r.edges,f.roi,2,n,o);break;case"roi-handle":T(i,s,r.position,f.handle,5,n,o);break;case"robot-skeleton":{for(let c=0;c+1<r.points.length;c++)M(i,s,[[r.points[c],r.points[c+1]]],f.skeleton,4,n,o);for(const c of r.points)T(i,s,c,f.skeleton,3,n,o);break}}i.sort((r,c)=>c.depth-r.depth);for(const r of i){e.beginPath(),e.moveTo(r.pts[0].x,r.pts[0].y);for(let c=1;c<r.pts.length;c++)e.lineTo(r.pts[c].x,r.pts[c].y);r.fill?(e.closePath(),e.fillStyle=r.color,e.fill()):(e.strokeStyle=r.color,e.lineWidth=r.width,e.stroke())}}function _e(e,t,s,n,o,i,r=12){let c=null,a=r;for(const l of e){if(l.kind!=="roi-handle")continue;const d=k(t,l.position,o,i),p=Math.hypot(d.x-s,d.y-n);p<=a&&(a=p,c={handle:l.handle,depth:d.depth})}return c}const h=new we,$e=new ce(""),S=new be($e,h),u=e=>{const t=document.getElementById(e);if(!t)throw new Error(`missing element #${e}`);return t},m=u("canvas"),te=m.getContext("2d"),v=ke();async function O(e){const t=e.files&&e.files[0];return t?JSON.parse(await t.text()):null}function se(){const e=m.getBoundingClientRect();m.width=Math.max(1,Math.floor(e.width*devicePixelRatio)),m.height=Math.max(1,Math.floor(e.height*devicePixelRatio)),te.setTransform(devicePixelRatio,0,0,devicePixelRatio,0,0),R()}function R(){var l;const e=h.get(),t=m.getBoundingClientRect(),s=t.width,n=t.height;Oe(te,ee(e),v,s,n);const o=K(e);u("count").textContent=`${o} candidates`;const i=u("cursor");i.max=String(Math.max(o-1,0)),document.activeElement!==i&&(i.value=String(e.cursor)),u("get-grasps").disabled=e.pending,u("set-wp").disabled=e.pending,u("update-object").disabled=e.pending,u("create-mesh").disabled=e.pending,u("open-session").disabled=e.pending,u("progress").textContent=e.progress?`${e.progress.phase} ${(e.progress.fraction*100).toFixed(0)}%`:"";const r=(l=e.bundle)==null?void 0:l.selected;u("selected").textContent=r==null?"":`selected: ${r}`,u("refresh-prompt").style.display=e.refreshPrompt?"block":"none";const c=u("banners");for(const d of Array.from(c.querySelectorAll(".banner")))d.remove();for(const d of e.banners){const p=document.createElement("div");p.className=`banner ${d.kind}`;const x=document.createElement("span");x.textContent=d.text;const g=document.createElement("button");g.textContent="x",g.addEventListener("click",()=>h.dismissBanner(d.id)),p.append(x,g),c.append(p)}qe();const a=e.bundle?`session ${e.bundle.session}  rev ${e.bundle.revision}
cursor ${e.cursor}  mode ${e.mode}`:"no session";u("hud").textContent=a}const ne=[["roi-cx","c",0],["roi-cy","c",1],["roi-cz","c",2],["roi-hx","h",0],["roi-hy","h",1],["roi-hz","h",2]];function qe(){const{box:e,active:t}=h.get().roi;u("roi-active").checked=t;for(const[s,n,o]of ne){const i=u(s);document.activeElement!==i&&(i.value=fe(n==="c"?e.center[o]:e.halfExtents[o]))}}h.subscribe(R);u("open-session").addEventListener("click",async()=>{const e=await O(u("robot-file")),t=await O(u("task-file"));if(!e||!t){h.pushBanner("info","pick robot and task files first");return}const s=await O(u("config-file"));await S.openSession(e,t,s??void 0);const n=h.get().sessionId;n&&(u("session-id").value=n)});u("join-session").addEventListener("click",()=>{const e=u("session-id").value.trim();e&&S.joinSession(e)});u("get-grasps").addEventListener("click",()=>{const e=Number(u("seed").value)||0;S.getGrasps(e)});u("cursor").addEventListener("change",e=>{S.scroll(Number(e.target.value)||0)});u("mode-compact").addEventListener("change",()=>h.setMode("compact-arrows"));u("mode-single").addEventListener("change",()=>h.setMode("single-grasp"));u("set-wp").addEventListener("click",()=>void S.setWp());u("do-refresh").addEventListener("click",()=>{S.refreshScene()});u("update-object").addEventListener("click",async()=>{const e=await O(u("object-file"));if(!e){h.pushBanner("info","pick an object mesh file first");return}await S.updateObject(e)});u("roi-active").addEventListener("change",e=>{const t=h.get().roi;h.patch({roi:{...t,active:e.target.checked}})});for(const[e,t,s]of ne)u(e).addEventListener("change",n=>{const o=ge(n.target.value);if(o===null)return;const i=h.get().roi,r=t==="c"?he(i.box,s,o):pe(i.box,s,o);h.patch({roi:{...i,box:r}})});u("create-mesh").addEventListener("click",async()=>{const e=await O(u("cloud-file"));if(!e||!Array.isArray(e.points)){h.pushBanner("info","pick a point cloud file first");return}await S.createMesh(e)});let H=!1,L=null,A=0,N=0;m.addEventListener("mousedown",e=>{const t=m.getBoundingClientRect(),s=e.clientX-t.left,n=e.clientY-t.top;A=s,N=n;const o=h.get();if(o.roi.active){const i=_e(ee(o),v,s,n,t.width,t.height);if(i){L=i.handle;return}}H=!0});m.addEventListener("mousemove",e=>{const t=m.getBoundingClientRect(),s=e.clientX-t.left,n=e.clientY-t.top,o=s-A,i=n-N;if(A=s,N=n,L){const r=h.get().roi,c=D(L),a=G(L),l=U(r.box,L),d=[0,0,0];d[c]=a*.01;const p=k(v,l,t.width,t.height),x=k(v,[l[0]+d[0],l[1]+d[1],l[2]+d[2]],t.width,t.height),g=x.x-p.x,y=x.y-p.y,C=g*g+y*y;if(C>1e-9){const re=(o*g+i*y)/C*.01;h.patch({roi:{...r,box:ue(r.box,L,re)}})}return}H&&(v.yaw-=o*.008,v.pitch=Math.min(1.5,Math.max(-1.5,v.pitch+i*.008)),R())});window.addEventListener("mouseup",()=>{H=!1,L=null});m.addEventListener("wheel",e=>{e.preventDefault(),v.distance=Math.min(8,Math.max(.2,v.distance*(1+e.deltaY*.001))),R()});window.addEventListener("resize",se);se();
